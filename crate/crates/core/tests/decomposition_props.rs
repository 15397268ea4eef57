//! Property tests for decompositions of random bounded-degree targets.

use proptest::prelude::*;

use perturbed::decomposition::{decompose, verify, Decomposition};
use perturbed::graph::random_bounded_degree;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn decompositions_verify_and_partition(n in 12usize..40, delta in 2usize..=5, p in 0.1f64..0.6, seed in any::<u64>()) {
        let f = random_bounded_degree(n, delta, p, seed).unwrap();
        let d = decompose(&f, delta, 1.0).unwrap();
        let report = verify(&d);
        prop_assert!(report.pass, "{:?}", report);
        let mut count = vec![0usize; n];
        for &v in &d.f_prime {
            count[v] += 1;
        }
        for (_, spot) in d.spots() {
            for &v in spot {
                count[v] += 1;
            }
        }
        prop_assert!(count.iter().all(|&c| c == 1));
        let doc = d.to_doc();
        prop_assert_eq!(Decomposition::from_doc(&doc, &f).unwrap(), d);
    }
}
