use crowdsel::pbd::{self, DemandWindow, OpinionVector};
use proptest::prelude::*;

fn prob() -> impl Strategy<Value = f64> {
    prop_oneof![1 => Just(0.0), 1 => Just(1.0), 8 => 0.0..=1.0f64]
}

fn opinions(max_len: usize) -> impl Strategy<Value = OpinionVector> {
    prop::collection::vec(prob(), 1..=max_len).prop_map(|v| OpinionVector::new(v).unwrap())
}

/// Windows with `theta1 < theta2`, as `(k, theta1, theta0)`.
fn proper_window(max_theta2: usize) -> impl Strategy<Value = DemandWindow> {
    (1..=max_theta2, 0..=4usize)
        .prop_flat_map(|(t2, t0)| (0..t2).prop_map(move |t1| DemandWindow::new(t2 + t0, t1, t0).unwrap()))
}

fn check_unimodal(vals: &[f64], grid: &[f64], peak: f64) -> Result<(), TestCaseError> {
    for i in 1..vals.len() {
        if grid[i] <= peak {
            prop_assert!(vals[i] >= vals[i - 1] - 1e-12, "dip before the peak at {}", grid[i]);
        } else if grid[i - 1] >= peak {
            prop_assert!(vals[i] <= vals[i - 1] + 1e-12, "rise after the peak at {}", grid[i]);
        }
    }
    Ok(())
}

proptest! {
    #[test]
    fn dftcf_matches_bruteforce(p in opinions(12)) {
        let brute = pbd::pmf_bruteforce(&p).unwrap();
        let fast = pbd::pmf_dftcf(&p);
        prop_assert_eq!(brute.mass().len(), p.len() + 1);
        prop_assert_eq!(fast.mass().len(), p.len() + 1);
        for (a, b) in brute.mass().iter().zip(fast.mass()) {
            prop_assert!((a - b).abs() <= 1e-9, "{} vs {}", a, b);
        }
        prop_assert!((brute.mass().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        prop_assert!((fast.mass().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn tau_is_a_pmf_slice(p in opinions(16), t1 in 0..8usize, t0 in 0..8usize) {
        let k = p.len();
        prop_assume!(t1 + t0 <= k);
        let w = DemandWindow::new(k, t1, t0).unwrap();
        let tau = pbd::tau_exact(&p, &w).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&tau));
        prop_assert_eq!(tau, pbd::pmf_dftcf(&p).window(w.theta1(), w.theta2()));
    }

    #[test]
    fn identical_probabilities_give_binomial(c in 0.0..=1.0f64, n in 1..=40usize) {
        let p = OpinionVector::new(vec![c; n]).unwrap();
        for (i, m) in pbd::pmf_dftcf(&p).mass().iter().enumerate() {
            prop_assert!((m - pbd::binomial_pmf(i, n, c)).abs() <= 1e-9);
        }
    }

    #[test]
    fn poisson_surrogate_peaks_at_omega(w in proper_window(15)) {
        let omega = pbd::peak_poisson(&w).unwrap();
        let k = w.k() as f64;
        let grid: Vec<f64> = (1..400).map(|j| k * j as f64 / 400.0).collect();
        let vals: Vec<f64> = grid.iter().map(|&l| pbd::g_poisson(l, &w).unwrap()).collect();
        check_unimodal(&vals, &grid, omega)?;
    }

    #[test]
    fn binomial_surrogate_peaks_at_p_star(w in proper_window(15)) {
        let (p_star, omega_b) = pbd::peak_binomial(w.k(), &w).unwrap();
        prop_assert!((0.0..=1.0).contains(&p_star));
        prop_assert!((omega_b - w.k() as f64 * p_star).abs() < 1e-12);
        let grid: Vec<f64> = (1..400).map(|j| j as f64 / 400.0).collect();
        let vals: Vec<f64> = grid.iter().map(|&p| pbd::g_binomial(p, w.k(), &w).unwrap()).collect();
        check_unimodal(&vals, &grid, p_star)?;
    }

    #[test]
    fn poisson_bound_covers_cmf_deviation(p in opinions(12)) {
        let bound = pbd::poisson_error_bound(&p);
        prop_assert!((0.0..=1.0).contains(&bound));
        let pmf = pbd::pmf_bruteforce(&p).unwrap();
        let mu: f64 = p.probs().iter().sum();
        for i in 0..=p.len() + 5 {
            let dev = (pmf.cdf(i.min(p.len())) - pbd::poisson_cdf(i, mu)).abs();
            prop_assert!(dev <= bound + 1e-12, "i = {}: {} > {}", i, dev, bound);
        }
    }

    #[test]
    fn binomial_bound_covers_total_variation(p in opinions(12)) {
        let bound = pbd::binomial_error_bound(&p);
        prop_assert!(bound >= 0.0);
        let n = p.len();
        let p_bar = p.probs().iter().sum::<f64>() / n as f64;
        let pmf = pbd::pmf_bruteforce(&p).unwrap();
        let tv: f64 = 0.5 * pmf.mass().iter().enumerate().map(|(i, m)| (m - pbd::binomial_pmf(i, n, p_bar)).abs()).sum::<f64>();
        prop_assert!(tv <= bound + 1e-12, "{} > {}", tv, bound);
    }

    #[test]
    fn normal_surrogate_is_a_probability(p in opinions(30), t1 in 0..10usize, t0 in 0..10usize) {
        prop_assume!(t1 + t0 <= p.len());
        let w = DemandWindow::new(p.len(), t1, t0).unwrap();
        let g = pbd::g_normal(&p.stats(), &w);
        prop_assert!((0.0..=1.0).contains(&g));
    }
}

#[test]
fn out_of_range_inputs_are_rejected() {
    assert!(OpinionVector::new(vec![]).is_err());
    assert!(OpinionVector::new(vec![0.5, 1.5]).is_err());
    assert!(OpinionVector::new(vec![f64::NAN]).is_err());
    assert!(DemandWindow::new(3, 2, 2).is_err());
    let w = DemandWindow::new(3, 1, 1).unwrap();
    assert!(pbd::tau_exact(&OpinionVector::new(vec![0.5; 4]).unwrap(), &w).is_err());
    assert!(pbd::g_poisson(-1.0, &w).is_err());
    assert!(pbd::g_binomial(0.5, 1, &w).is_err());
    assert!(pbd::peak_poisson(&DemandWindow::new(4, 2, 2).unwrap()).is_err());
}

#[test]
fn bruteforce_has_a_size_guard() {
    assert!(pbd::pmf_bruteforce(&OpinionVector::new(vec![0.5; 26]).unwrap()).is_err());
    assert!(pbd::pmf_bruteforce(&OpinionVector::new(vec![0.5; 20]).unwrap()).is_ok());
}
