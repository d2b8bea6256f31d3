use lesion_symmetry::metrics::{
    accuracy, confusion_matrix, full_report, kappa, per_class_prf, weighted_f1, ClassSet, ConfusionMatrix, Exact,
};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn classes(k: usize) -> ClassSet {
    ClassSet::new(&(0..k).map(|i| format!("k{i}")).collect::<Vec<_>>()).unwrap()
}

fn arb_matrix() -> impl Strategy<Value = ConfusionMatrix> {
    (1usize..=6).prop_flat_map(|k| {
        prop::collection::vec(prop::collection::vec(0u64..200_000, k), k)
            .prop_filter("n > 0", |rows| rows.iter().flatten().any(|&c| c > 0))
            .prop_map(move |rows| ConfusionMatrix::from_cells(classes(k), rows).unwrap())
    })
}

fn frac(num: u64, den: u64) -> Exact {
    if den == 0 {
        Exact::zero()
    } else {
        BigRational::new(num.into(), den.into())
    }
}

proptest! {
    #[test]
    fn prf_matches_recount(cm in arb_matrix()) {
        let (prf, _) = per_class_prf(&cm).unwrap();
        let c = cm.cells();
        for k in 0..cm.k() {
            let tp = c[k][k];
            let fp: u64 = (0..cm.k()).filter(|&j| j != k).map(|j| c[k][j]).sum();
            let fn_: u64 = (0..cm.k()).filter(|&i| i != k).map(|i| c[i][k]).sum();
            prop_assert_eq!(&prf[k].precision, &frac(tp, tp + fp));
            prop_assert_eq!(&prf[k].recall, &frac(tp, tp + fn_));
            prop_assert_eq!(&prf[k].f1, &frac(2 * tp, 2 * tp + fp + fn_));
        }
    }

    #[test]
    fn values_in_range(cm in arb_matrix()) {
        let r = full_report(&cm).unwrap();
        let unit = |v: &Exact| *v >= Exact::zero() && *v <= Exact::one();
        for c in &r.per_class {
            prop_assert!(unit(&c.precision) && unit(&c.recall) && unit(&c.f1));
        }
        prop_assert!(unit(&r.macro_f1) && unit(&r.weighted_f1) && unit(&r.accuracy));
        prop_assert!(r.kappa >= -Exact::one() && r.kappa <= Exact::one());
        let support: u64 = r.per_class.iter().map(|c| c.support).sum();
        prop_assert_eq!(support, cm.n());
    }

    #[test]
    fn accuracy_is_support_weighted_recall(cm in arb_matrix()) {
        let (prf, _) = per_class_prf(&cm).unwrap();
        let n = Exact::from_integer(cm.n().into());
        let weighted: Exact = prf
            .iter()
            .enumerate()
            .map(|(k, c)| c.recall.clone() * Exact::from_integer(cm.col_sum(k).into()))
            .sum::<Exact>() / n;
        prop_assert_eq!(weighted, accuracy(&cm).unwrap());
    }

    #[test]
    fn relabeling_permutes_per_class_and_keeps_aggregates(cm in arb_matrix(), seed in any::<u64>()) {
        let k = cm.k();
        let mut order: Vec<usize> = (0..k).collect();
        lesion_symmetry::rng::SeededRng::new(seed).shuffle(&mut order);
        let p = cm.permuted(&order).unwrap();
        let (a, _) = per_class_prf(&cm).unwrap();
        let (b, _) = per_class_prf(&p).unwrap();
        for (new, &old) in order.iter().enumerate() {
            prop_assert_eq!(&b[new], &a[old]);
        }
        prop_assert_eq!(accuracy(&p).unwrap(), accuracy(&cm).unwrap());
        prop_assert_eq!(weighted_f1(&p).unwrap(), weighted_f1(&cm).unwrap());
        prop_assert_eq!(kappa(&p).unwrap().0, kappa(&cm).unwrap().0);
    }

    #[test]
    fn tally_matches_pairs(pairs in prop::collection::vec((0usize..3, 0usize..3), 1..200)) {
        let set = ClassSet::default();
        let pred: Vec<&str> = pairs.iter().map(|&(p, _)| set.name(p)).collect();
        let actual: Vec<&str> = pairs.iter().map(|&(_, a)| set.name(a)).collect();
        let cm = confusion_matrix(&pred, &actual, &set).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = pairs.iter().filter(|&&(p, a)| p == i && a == j).count() as u64;
                prop_assert_eq!(cm.cells()[i][j], expected);
            }
        }
    }
}
