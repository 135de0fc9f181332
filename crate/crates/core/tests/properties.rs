use proptest::prelude::*;

use entropy_lab::estimators::{bz_r0, estimate, EstimatorKind};
use entropy_lab::intervals::{aci, bootstrap_pair, gci_umvue, BootConfig};
use entropy_lab::model::{d0, entropy_from_log_sigma, m0, suff_stats, Loss, TwoSampleData};
use entropy_lab::numerics::special::{digamma, trigamma};
use entropy_lab::risk::{simulate_risk, SimConfig};

fn loss_strategy() -> impl Strategy<Value = Loss> {
    prop_oneof![
        Just(Loss::SquaredError),
        (-4.0f64..4.0)
            .prop_filter("a1 != 0", |a| a.abs() > 0.05)
            .prop_map(|a1| Loss::Linex { a1 }),
    ]
}

fn data_strategy() -> impl Strategy<Value = TwoSampleData> {
    (3usize..12)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(-50.0f64..50.0, n),
                prop::collection::vec(-50.0f64..50.0, n),
            )
        })
        .prop_map(|(a, b)| TwoSampleData {
            sample1: a,
            sample2: b,
        })
        .prop_filter("spread", |d| {
            suff_stats(d).map(|s| s.s > 1e-3).unwrap_or(false)
        })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn estimators_shift_by_log_scale(
        d in data_strategy(),
        loss in loss_strategy(),
        a in 0.01f64..100.0,
        b in -1e3f64..1e3,
    ) {
        let st = suff_stats(&d).unwrap();
        let st2 = suff_stats(&d.affine(a, b, b)).unwrap();
        prop_assert!(close(st.w, st2.w, 1e-9));
        for k in EstimatorKind::builtin() {
            let x = estimate(&k, &st, loss).unwrap();
            let y = estimate(&k, &st2, loss).unwrap();
            prop_assert!(close(y, x + a.ln(), 1e-9), "{k}: {x} vs {y}");
        }
    }

    #[test]
    fn intervals_shift_by_log_scale(
        d in data_strategy(),
        a in 0.01f64..100.0,
        b in -1e3f64..1e3,
        seed in any::<u64>(),
    ) {
        let e = d.affine(a, b, b);
        let la = a.ln();
        let (p, q) = (aci(&d, 0.9).unwrap(), aci(&e, 0.9).unwrap());
        prop_assert!(close(q.lower, p.lower + la, 1e-9) && close(q.upper, p.upper + la, 1e-9));
        let st = suff_stats(&d).unwrap();
        let se = suff_stats(&e).unwrap();
        let (p, q) = (gci_umvue(&st, 0.9, 1000, seed).unwrap(), gci_umvue(&se, 0.9, 1000, seed).unwrap());
        prop_assert!(close(q.lower, p.lower + la, 1e-9) && close(q.upper, p.upper + la, 1e-9));
        let cfg = BootConfig { k: 200, seed };
        let (p, _) = bootstrap_pair(&d, 0.9, &cfg).unwrap();
        let (q, _) = bootstrap_pair(&e, 0.9, &cfg).unwrap();
        prop_assert!(close(q.lower, p.lower + la, 1e-8) && close(q.upper, p.upper + la, 1e-8));
    }

    #[test]
    fn stein_moves_toward_the_sign_of_w(d in data_strategy(), loss in loss_strategy()) {
        let st = suff_stats(&d).unwrap();
        let b = estimate(&EstimatorKind::Baee, &st, loss).unwrap();
        let s = estimate(&EstimatorKind::Stein, &st, loss).unwrap();
        if st.w > 0.0 {
            prop_assert!(s <= b + 1e-12);
        } else {
            prop_assert!(s >= b - 1e-12);
        }
    }

    #[test]
    fn bz_cut_lies_between_limits(
        w in 0.0f64..50.0,
        n in 6usize..30,
        loss in loss_strategy(),
    ) {
        let lo = m0(loss, n).unwrap();
        let hi = d0(loss, n).unwrap();
        let r = bz_r0(w, n, loss).unwrap();
        prop_assert!(lo - 1e-9 <= r && r <= hi + 1e-9, "{lo} {r} {hi}");
    }

    #[test]
    fn bz_cut_nondecreasing(
        w in 0.0f64..10.0,
        dw in 0.0f64..2.0,
        n in 6usize..30,
        loss in loss_strategy(),
    ) {
        prop_assert!(bz_r0(w + dw, n, loss).unwrap() >= bz_r0(w, n, loss).unwrap() - 1e-10);
    }

    #[test]
    fn loss_derivative_increasing(loss in loss_strategy(), t in -5.0f64..5.0, dt in 1e-3f64..3.0) {
        prop_assert!(loss.deriv(t + dt) > loss.deriv(t));
        prop_assert!(loss.eval(t) >= 0.0);
        prop_assert!(loss.deriv(t) * t >= 0.0);
    }

    #[test]
    fn polygamma_recurrences(x in 0.05f64..50.0) {
        prop_assert!(close(digamma(x + 1.0).unwrap(), digamma(x).unwrap() + 1.0 / x, 1e-12));
        prop_assert!(close(trigamma(x + 1.0).unwrap(), trigamma(x).unwrap() - 1.0 / (x * x), 1e-12));
    }

    #[test]
    fn digamma_reflection(x in 0.01f64..0.99) {
        use std::f64::consts::PI;
        let lhs = digamma(1.0 - x).unwrap() - digamma(x).unwrap();
        prop_assert!(close(lhs, PI / (PI * x).tan(), 1e-11));
    }

    #[test]
    fn entropy_is_affine_in_tau(t in -20.0f64..20.0) {
        prop_assert!(close(entropy_from_log_sigma(t) - entropy_from_log_sigma(0.0), 2.0 * t, 1e-13));
    }
}

#[test]
fn risk_simulation_is_seed_deterministic() {
    let cfg = SimConfig {
        n: 6,
        eta_grid: vec![0.0, 1.0],
        loss: Loss::Linex { a1: 2.0 },
        replications: 5_000,
        master_seed: 99,
        estimators: EstimatorKind::builtin(),
    };
    let a = simulate_risk(&cfg).unwrap().to_csv();
    let b = simulate_risk(&cfg).unwrap().to_csv();
    assert_eq!(a, b);
    let other = simulate_risk(&SimConfig {
        master_seed: 100,
        ..cfg
    })
    .unwrap()
    .to_csv();
    assert_ne!(a, other);
}

#[test]
fn gci_is_seed_deterministic() {
    let st = suff_stats(&entropy_lab::boeing()).unwrap();
    let a = gci_umvue(&st, 0.95, 2000, 7).unwrap();
    let b = gci_umvue(&st, 0.95, 2000, 7).unwrap();
    assert_eq!((a.lower, a.upper), (b.lower, b.upper));
}
