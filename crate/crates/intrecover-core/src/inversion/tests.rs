use super::*;
use crate::lattice::Beta;
use crate::sampling::{binary_pair_witness, extract_subsignal, sample_minimal, sample_minimal_1d};
use crate::transform::{decimate_freq, PrecisionContext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params_1e14() -> InversionParams {
    InversionParams {
        beta: BetaParams {
            beta2: Beta::Fixed(1e14),
            ..BetaParams::default()
        },
        ..InversionParams::default()
    }
}

fn random_binary(rng: &mut ChaCha8Rng, n1: usize, n2: usize) -> IntImage {
    Grid::from_fn(n1, n2, |_, _| rng.gen_range(0..=1))
}

fn reps(batch: &[SubproblemKey]) -> Vec<(u64, u64)> {
    batch.iter().map(|k| k.rep).collect()
}

#[test]
fn schedule_examples() {
    let s = schedule(1, 6).unwrap();
    let ds: Vec<Vec<u64>> = s.iter().map(|b| b.iter().map(|k| k.big_d).collect()).collect();
    assert_eq!(ds, vec![vec![1], vec![2], vec![3], vec![6]]);
    let s = schedule(4, 6).unwrap();
    assert_eq!(reps(&s[0]), vec![(0, 0)]);
    assert_eq!(reps(&s[1]), vec![(0, 3)]);
    assert_eq!(reps(&s[2]), vec![(0, 2)]);
    assert_eq!(reps(&s[3]), vec![(0, 1)]);
    assert_eq!(s.iter().map(Vec::len).sum::<usize>(), 12);
}

#[test]
fn dependencies_precede() {
    for n1 in 1..=12u64 {
        for n2 in 1..=12u64 {
            let map = ClassMap::new(n1, n2).unwrap();
            let mut batch_of = vec![usize::MAX; map.classes().len()];
            let s = schedule(n1, n2).unwrap();
            for (b, keys) in s.iter().enumerate() {
                for k in keys {
                    batch_of[map.index_of(k.rep).unwrap()] = b;
                }
            }
            for (b, keys) in s.iter().enumerate() {
                for k in keys {
                    for dep in dependencies(&map, k.rep.0, k.rep.1).unwrap() {
                        assert!(batch_of[dep.class] < b, "{n1}x{n2} {k}");
                    }
                }
            }
        }
    }
}

#[test]
fn permutation_and_decimation_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let x = Grid::from_fn(6, 10, |_, _| rng.gen_range(-3..=3));
    let map = ClassMap::new(6, 10).unwrap();
    for c in map.classes() {
        let base = extract_subsignal(&x, c.rep.0, c.rep.1).unwrap();
        for (lam, &(k, l)) in crate::sampling::leading_units(c.big_d, usize::MAX).iter().zip(&c.orbit) {
            assert_eq!(extract_subsignal(&x, k, l).unwrap(), permute_subsignal(&base, *lam).unwrap());
        }
        for dep in dependencies(&map, c.rep.0, c.rep.1).unwrap() {
            let src_rep = map.classes()[dep.class].rep;
            let src = extract_subsignal(&x, src_rep.0, src_rep.1).unwrap();
            assert_eq!(
                decimate_freq(&base, dep.prime as usize).unwrap(),
                permute_subsignal(&src, dep.lambda).unwrap()
            );
        }
    }
}

#[test]
fn binary_pair_first_member() {
    let (a, b) = binary_pair_witness(2, 3, 1, 1).unwrap();
    let ctx = PrecisionContext::default();
    let spec = sample_minimal::<f64>(&a, 1, &ctx).unwrap();
    let inv = invert_2d(&spec, &InversionParams::default()).unwrap();
    assert_eq!(inv.image, a);
    assert_ne!(inv.image, b);
}

#[test]
fn random_binary_12x18() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let ctx = PrecisionContext::default();
    for _ in 0..3 {
        let x = random_binary(&mut rng, 12, 18);
        let spec = sample_minimal::<f64>(&x, 1, &ctx).unwrap();
        let inv = invert_2d(&spec, &params_1e14()).unwrap();
        assert_eq!(inv.image, x);
        assert_eq!(inv.report.solves, 48);
        assert_eq!(inv.report.records.len(), 48);
        assert!(inv.report.records.iter().all(|r| r.wall_secs.is_none()));
    }
}

#[test]
fn one_dimensional() {
    let ctx = PrecisionContext::default();
    let spec = sample_minimal_1d::<f64>(&[3, -1, 4, 1, -5, 9], 1, &ctx).unwrap();
    let inv = invert_1d(&spec, &InversionParams::default()).unwrap();
    assert_eq!(inv.signal(), &[3, -1, 4, 1, -5, 9]);
    assert_eq!(inv.report.count(SubproblemStatus::Trivial), 4);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let x: Vec<i64> = (0..30).map(|_| rng.gen_range(0..=1)).collect();
    let spec = sample_minimal_1d::<f64>(&x, 1, &ctx).unwrap();
    let inv = invert_1d(&spec, &params_1e14()).unwrap();
    assert_eq!(inv.signal(), &x[..]);
    assert!(inv.report.count(SubproblemStatus::LatticeSolved) >= 1);

    let grid = sample_minimal::<f64>(&Grid::filled(2, 2, 1), 1, &ctx).unwrap();
    assert!(invert_1d(&grid, &InversionParams::default()).is_err());
}

#[test]
fn tampered_spectrum_names_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let x = random_binary(&mut rng, 7, 7);
    let mut spec = sample_minimal::<f64>(&x, 1, &PrecisionContext::default()).unwrap();
    let idx = spec.classes.iter().position(|c| c.big_d == 7).unwrap();
    spec.classes[idx].entries[0].1 = Complex::zero();
    let rep = spec.classes[idx].rep;
    let err = invert_2d(&spec, &params_1e14()).unwrap_err();
    let key = err.report.failed_key.unwrap();
    assert_eq!(key.rep, rep);
    assert!(matches!(err.error, Error::Subproblem { .. }));
    assert_eq!(err.report.records.last().unwrap().status, SubproblemStatus::Failed);
}

// Runner that rejects single-coefficient attempts on long subsignals.
fn picky(tasks: &[SubproblemData<f64>], params: &BetaParams) -> Vec<TaskResult> {
    tasks
        .iter()
        .map(|t| {
            if t.big_d > 6 && t.m() == 1 {
                (Err(Error::NoCandidate { d: t.big_d, shortest_norm: 0.0, predicted_norm: 0.0 }), None)
            } else {
                (solve_subproblem(t, params), None)
            }
        })
        .collect()
}

#[test]
fn retry_uses_extra_coefficient() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let x: Vec<i64> = (0..30).map(|_| rng.gen_range(0..=1)).collect();
    let ctx = PrecisionContext::default();
    let spec = sample_minimal_1d::<f64>(&x, 2, &ctx).unwrap();
    let params = InversionParams {
        max_m: Some(1),
        retry: true,
        ..params_1e14()
    };
    let inv = invert_with(&spec, &params, picky).unwrap();
    assert_eq!(inv.signal(), &x[..]);
    let top = inv.report.records.last().unwrap();
    assert_eq!((top.m, top.attempts), (2, 2));
    assert_eq!(inv.report.solves, 8 + 3);

    let one = sample_minimal_1d::<f64>(&x, 1, &ctx).unwrap();
    let err = invert_with(&one, &params, picky).unwrap_err();
    let Error::Subproblem { cause, d, .. } = err.error else { panic!() };
    assert_eq!(d, 10);
    assert!(matches!(*cause, Error::DataIncomplete(_)));

    let no_retry = InversionParams { retry: false, ..params };
    let err = invert_with(&spec, &no_retry, picky).unwrap_err();
    assert!(matches!(err.error, Error::Subproblem { d: 10, .. }));
}

#[test]
fn deterministic_reports() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let x = random_binary(&mut rng, 9, 11);
    let spec = sample_minimal::<f64>(&x, 2, &PrecisionContext::default()).unwrap();
    let a = invert_2d(&spec, &params_1e14()).unwrap();
    let b = invert_2d(&spec, &params_1e14()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.image, x);
}
