use crowdsel::smodel::{self, Crowd, SimilarityMatrix};
use proptest::prelude::*;

fn matrix(n: std::ops::RangeInclusive<usize>, lo: f64, hi: f64) -> impl Strategy<Value = SimilarityMatrix> {
    n.prop_flat_map(move |n| {
        prop::collection::vec(lo..=hi, n * (n - 1) / 2).prop_map(move |upper| {
            let mut it = upper.into_iter();
            let mut sim = vec![0.0; n * n];
            for i in 0..n {
                for j in i + 1..n {
                    let v = it.next().unwrap();
                    sim[i * n + j] = v;
                    sim[j * n + i] = v;
                }
            }
            SimilarityMatrix::new(n, sim).unwrap()
        })
    })
}

fn pair_sum(members: &[usize], m: &SimilarityMatrix) -> f64 {
    let mut s = 0.0;
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            s += m.get(i, j);
        }
    }
    s
}

/// Best diversity over all size-k subsets, by an independent bitmask scan.
fn best_by_bitmask(m: &SimilarityMatrix, k: usize) -> f64 {
    let n = m.n();
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == k)
        .map(|mask| {
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            -pair_sum(&members, m) / k as f64
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

proptest! {
    #[test]
    fn pair_sum_identity(m in matrix(3..=12, -1.0, 1.0), seed in any::<u64>()) {
        let n = m.n();
        let mut order: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = crowdsel::seed::mix64(s);
            order.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let size = (seed % (n as u64 - 1)) as usize;
        let (w0, w1, rest) = (order[0], order[1], &order[2..2 + size.min(n - 2)]);
        let sum = |extra: &[usize]| {
            let mut v = rest.to_vec();
            v.extend_from_slice(extra);
            smodel::sum_objective(&Crowd::new(v).unwrap(), &m).unwrap()
        };
        let lhs = sum(&[w0]) + sum(&[w1]) - sum(&[w0, w1]) - sum(&[]);
        prop_assert!((lhs - m.get(w0, w1)).abs() <= 1e-12);
    }

    #[test]
    fn sum_is_submodular_for_non_negative_similarity(m in matrix(4..=10, 0.0, 1.0), mask in any::<u32>(), extra in any::<u32>()) {
        let n = m.n();
        let w = (mask as usize) % n;
        let small: Vec<usize> = (0..n).filter(|&i| i != w && mask >> (i + 8) & 1 == 1).collect();
        let mut large = small.clone();
        large.extend((0..n).filter(|&i| i != w && !small.contains(&i) && extra >> i & 1 == 1));
        let gain = |base: &[usize]| {
            let mut with = base.to_vec();
            with.push(w);
            smodel::sum_objective(&Crowd::new(with).unwrap(), &m).unwrap()
                - smodel::sum_objective(&Crowd::new(base.to_vec()).unwrap(), &m).unwrap()
        };
        prop_assert!(gain(&small) >= gain(&large) - 1e-12);
    }

    #[test]
    fn diversity_is_permutation_equivariant(m in matrix(3..=10, -1.0, 1.0), seed in any::<u64>()) {
        let n = m.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = crowdsel::seed::mix64(s);
            perm.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let permuted = SimilarityMatrix::from_fn(n, |i, j| m.get(perm[i], perm[j])).unwrap();
        let members: Vec<usize> = (0..n).filter(|i| seed >> i & 1 == 1).collect();
        let mapped: Vec<usize> = members.iter().map(|&i| perm.iter().position(|&p| p == i).unwrap()).collect();
        let c = Crowd::new(members).unwrap();
        let c2 = Crowd::new(mapped).unwrap();
        prop_assert!((smodel::sum_objective(&c, &m).unwrap() - smodel::sum_objective(&c2, &permuted).unwrap()).abs() < 1e-12);
        if !c.is_empty() {
            prop_assert!((smodel::diversity(&c, &m).unwrap() - smodel::diversity(&c2, &permuted).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_matches_bitmask_scan_and_dominates_greedy(m in matrix(2..=9, -1.0, 1.0), k in 2..=9usize) {
        prop_assume!(k <= m.n());
        let exact = smodel::exact_select(&m, k).unwrap();
        let greedy = smodel::greedy_select(&m, k).unwrap();
        prop_assert_eq!(exact.len(), k);
        prop_assert_eq!(greedy.len(), k);
        let best = best_by_bitmask(&m, k);
        let exact_div = smodel::diversity(&exact, &m).unwrap();
        prop_assert!((exact_div - best).abs() < 1e-12);
        prop_assert!(smodel::diversity(&greedy, &m).unwrap() <= exact_div + 1e-12);
    }

    #[test]
    fn sum_is_size_times_diversity(m in matrix(3..=10, -1.0, 1.0), mask in 1u32..1024) {
        let members: Vec<usize> = (0..m.n()).filter(|i| mask >> i & 1 == 1).collect();
        prop_assume!(!members.is_empty());
        let c = Crowd::new(members.clone()).unwrap();
        let s = smodel::sum_objective(&c, &m).unwrap();
        prop_assert!((s + pair_sum(&members, &m)).abs() < 1e-12);
        prop_assert!((s - c.len() as f64 * smodel::diversity(&c, &m).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn greedy_beats_random_on_average() {
    let (mut greedy, mut random) = (0.0, 0.0);
    for t in 0..100u64 {
        let m = crowdsel::bench::gen_similarity_matrix(20, &Default::default(), t).unwrap();
        greedy += smodel::diversity(&smodel::greedy_select(&m, 5).unwrap(), &m).unwrap();
        random += smodel::diversity(&smodel::random_select(&m, 5, t).unwrap(), &m).unwrap();
    }
    assert!(greedy > random, "{greedy} vs {random}");
}

#[test]
fn greedy_picks_the_isolated_worker() {
    let z = 4;
    let m = SimilarityMatrix::from_fn(6, |i, j| if i == z || j == z { 0.0 } else { 0.9 }).unwrap();
    let c = smodel::greedy_select(&m, 3).unwrap();
    assert!(c.members().contains(&z));
    assert_eq!(smodel::greedy_select(&m, 2).unwrap().members(), &[0, 4]);
}

#[test]
fn guards_and_bounds() {
    let m = SimilarityMatrix::from_fn(5, |_, _| 0.1).unwrap();
    assert!(smodel::exact_select(&m, 0).is_err());
    assert!(smodel::exact_select(&m, 6).is_err());
    assert!(smodel::greedy_select(&m, 1).is_err());
    assert_eq!(smodel::exact_select(&m, 5).unwrap().members(), &[0, 1, 2, 3, 4]);
    let big = SimilarityMatrix::from_fn(60, |_, _| 0.0).unwrap();
    assert!(matches!(smodel::exact_select(&big, 10), Err(crowdsel::Error::EnumerationGuard { .. })));
    assert!(Crowd::new(vec![1, 1]).is_err());
    assert!(smodel::diversity(&Crowd::new(vec![]).unwrap(), &m).is_err());
}
