// Temporary: experiment on oracle agreement vs score gap. Deleted before ship.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vho_aco::criteria::oracle_rank;
use vho_aco::model::{CallContext, ChannelClass, ChannelId, ChannelProfile, TrafficType};
use vho_aco::scenario::Scenario;
use vho_aco::sweep::{run_replicates, scenario_graph};

fn random_channel(rng: &mut ChaCha8Rng, i: usize) -> ChannelProfile {
    let class = match i % 4 {
        0 => ChannelClass::Cdma,
        1 => ChannelClass::Wifi,
        2 => ChannelClass::Wimax,
        _ => ChannelClass::Other("lte".into()),
    };
    ChannelProfile {
        id: ChannelId::new(format!("ch{i}")),
        class,
        time_to_drop: rng.random_range(10.0..120.0),
        packet_loss_rate: rng.random_range(0.001..0.1),
        latency: rng.random_range(5.0..200.0),
        throughput: rng.random_range(0.5..50.0),
        packet_drop_prob: rng.random_range(0.001..0.05),
        out_of_order_rate: rng.random_range(0.0..0.05),
        cost: rng.random_range(0.001..0.02),
        bandwidth: rng.random_range(0.5..50.0),
        availability: 1.0,
    }
}

fn random_scenario(rng: &mut ChaCha8Rng) -> Scenario {
    let n = rng.random_range(3..=5);
    Scenario {
        format_version: 1,
        name: "generated".into(),
        call: CallContext {
            traffic_type: if rng.random_bool(0.5) {
                TrafficType::ThroughputSensitive
            } else {
                TrafficType::DelaySensitive
            },
            speed: rng.random_range(0.0..30.0),
            direction: rng.random_range(0.0..360.0),
            priority: rng.random_range(0.1..=1.0),
            handoff_count: rng.random_range(0..5),
        },
        channels: (0..n).map(|i| random_channel(rng, i)).collect(),
        criteria: Default::default(),
        aco: Default::default(),
    }
}

#[test]
fn agreement_vs_gap() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let seeds: Vec<u64> = (0..100).collect();
    let mut buckets: Vec<(f64, f64, usize)> = Vec::new(); // (ratio, agreement, non_converged)
    let mut tries = 0;
    while buckets.len() < 60 && tries < 4000 {
        tries += 1;
        let scenario = random_scenario(&mut rng);
        let graph = scenario_graph(&scenario).unwrap();
        let ranking = oracle_rank(&graph, &scenario.criteria).unwrap();
        let ratio = ranking[0].score / ranking[1].score;
        if ratio < 1.25 {
            continue;
        }
        // Oversample near the boundary: keep everything below 3x, thin above.
        if ratio > 3.0 && buckets.len() % 2 == 0 {
            continue;
        }
        let best = ranking[0].channel.clone();
        let reports = run_replicates(&scenario, 6, &seeds);
        let mut agree = 0;
        let mut non_converged = 0;
        for r in &reports {
            match &r.as_ref().unwrap().winner {
                Some(w) if *w == best => agree += 1,
                Some(_) => {}
                None => non_converged += 1,
            }
        }
        buckets.push((ratio, agree as f64, non_converged));
    }
    buckets.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (ratio, agree, nc) in &buckets {
        println!("ratio {ratio:8.3}  agree {agree:5.1}%  non-converged {nc}");
    }
}
