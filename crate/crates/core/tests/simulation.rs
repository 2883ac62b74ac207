//! Simulation invariants over the deaf-period grid.

use ndisco::sim::{evaluate, run_trial, EvalOptions, Scenario};
use ndisco::{BeaconPeriodSet, ChannelSet, Strategy, TieBreak};

fn scenario(c: usize, deaf: f64) -> Scenario {
    Scenario {
        id: format!("c{c}"),
        bps: BeaconPeriodSet::new([1, 2, 4, 8, 16]).unwrap(),
        channels: ChannelSet::new(c).unwrap(),
        neighbor_count: 20,
        deaf_fraction: deaf,
        trials: 1000,
        seed: 7,
    }
}

/// One-sided paired test at z = 2.33: within the GREEDY family a variant with
/// fewer switches must not have a significantly lower mean success rate.
#[test]
fn fewer_switches_never_lower_success_within_greedy_family() {
    let variants = TieBreak::ALL.map(Strategy::Greedy);
    let mut violations = Vec::new();
    for c in 2..=8 {
        let sc = scenario(c, 0.25);
        let schedules: Vec<_> = variants.iter().map(|v| v.generate(&sc.bps, sc.channels).unwrap()).collect();
        let rates: Vec<Vec<f64>> = schedules
            .iter()
            .map(|s| (0..sc.trials).map(|i| run_trial(s, &sc.population(i), sc.deaf_fraction).success_rate).collect())
            .collect();
        for a in 0..variants.len() {
            for b in 0..variants.len() {
                let (sa, sb) = (schedules[a].switch_slots().len(), schedules[b].switch_slots().len());
                if sa >= sb {
                    continue;
                }
                let diffs: Vec<f64> = rates[a].iter().zip(&rates[b]).map(|(x, y)| x - y).collect();
                let n = diffs.len() as f64;
                let mean = diffs.iter().sum::<f64>() / n;
                let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
                let se = (var / n).sqrt();
                if mean < -2.33 * se {
                    violations.push(format!(
                        "|C|={c}: {} ({sa} switches) success lower than {} ({sb} switches) by {:.4} (se {se:.4})",
                        variants[a], variants[b], -mean
                    ));
                }
            }
        }
    }
    assert!(violations.is_empty(), "{violations:#?}");
}

#[test]
fn no_deafness_means_full_success_for_complete_schedules() {
    for c in [2, 5] {
        let grid = vec![(scenario(c, 0.0), Strategy::ALL.iter().copied().filter(|s| *s != Strategy::OptB2).collect())];
        let eval = evaluate(&grid, EvalOptions::default()).unwrap();
        for row in eval.metrics.iter().filter(|r| r.metric == "success_rate") {
            assert_eq!(row.estimate.mean, 1.0, "{}", row.strategy);
            assert_eq!(row.estimate.ci95, 0.0);
        }
    }
}
