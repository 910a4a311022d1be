use intrecover_core::inversion::{dependencies, invert_2d, permute_subsignal, schedule, InversionParams};
use intrecover_core::lattice::{Beta, BetaParams};
use intrecover_core::sampling::{sample_minimal, ClassMap};
use intrecover_core::transform::{decimate_freq, PrecisionContext};
use intrecover_core::Grid;
use proptest::prelude::*;

fn params() -> InversionParams {
    InversionParams {
        beta: BetaParams {
            beta2: Beta::Fixed(1e14),
            ..BetaParams::default()
        },
        ..InversionParams::default()
    }
}

#[test]
fn dependencies_precede_up_to_24() {
    for n1 in 1..=24u64 {
        for n2 in 1..=24u64 {
            let map = ClassMap::new(n1, n2).unwrap();
            let batches = schedule(n1, n2).unwrap();
            let mut batch_of = vec![usize::MAX; map.classes().len()];
            for (b, keys) in batches.iter().enumerate() {
                for k in keys {
                    batch_of[map.index_of(k.rep).unwrap()] = b;
                }
            }
            assert!(batch_of.iter().all(|&b| b != usize::MAX));
            for (b, keys) in batches.iter().enumerate() {
                for k in keys {
                    for dep in dependencies(&map, k.rep.0, k.rep.1).unwrap() {
                        assert!(batch_of[dep.class] < b, "{n1}x{n2} {k}");
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn binary_round_trip(n1 in 1usize..=12, n2 in 1usize..=12, bits in prop::collection::vec(0i64..=1, 144), m in 1usize..=2) {
        let x = Grid::from_fn(n1, n2, |a, b| bits[a * 12 + b]);
        let spec = sample_minimal::<f64>(&x, m, &PrecisionContext::default()).unwrap();
        let inv = invert_2d(&spec, &params()).unwrap();
        prop_assert_eq!(&inv.image, &x);

        // every class solved once
        let classes = ClassMap::new(n1 as u64, n2 as u64).unwrap();
        prop_assert_eq!(inv.report.solves, classes.classes().len());
        prop_assert_eq!(inv.report.records.len(), classes.classes().len());

        // memoized subsignals decimate onto their dependencies
        for (key, sub) in &inv.subsignals {
            for dep in dependencies(&classes, key.rep.0, key.rep.1).unwrap() {
                let src = &inv.subsignals[dep.class].1;
                prop_assert_eq!(
                    decimate_freq(sub, dep.prime as usize).unwrap(),
                    permute_subsignal(src, dep.lambda).unwrap()
                );
            }
        }

        let again = invert_2d(&spec, &params()).unwrap();
        prop_assert_eq!(format!("{:?}", again.report), format!("{:?}", inv.report));
    }
}
