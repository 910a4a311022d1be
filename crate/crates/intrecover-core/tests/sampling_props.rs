use intrecover_core::numtheory::mod_inverse;
use intrecover_core::sampling::{
    amb1d_witness, amb2d_witness, count_classes, enumerate_classes, extract_subsignal, orbit, subsignal_geometry,
    ClassMap,
};
use intrecover_core::transform::{dft_1d_int, dft_2d_int};
use intrecover_core::Grid;
use std::time::Instant;

#[test]
fn orbits_partition_every_grid() {
    for n1 in 1..=24u64 {
        for n2 in 1..=24u64 {
            let classes = enumerate_classes(n1, n2);
            let mut seen = vec![false; (n1 * n2) as usize];
            let mut total = 0;
            for c in &classes {
                for &(k, l) in &c.orbit {
                    let i = (k * n2 + l) as usize;
                    assert!(!seen[i], "{n1}x{n2}: ({k},{l}) in two orbits");
                    seen[i] = true;
                }
                total += c.orbit.len();
            }
            assert_eq!(total as u64, n1 * n2);
            assert_eq!(classes.len() as u64, count_classes(n1, n2));
        }
    }
}

#[test]
fn orbit_membership_is_symmetric() {
    for (n1, n2) in [(12u64, 18u64), (9, 11), (16, 24), (7, 21)] {
        for k in 0..n1 {
            for l in 0..n2 {
                for (a, b) in orbit(n1, n2, k, l).unwrap() {
                    assert!(orbit(n1, n2, a, b).unwrap().contains(&(k, l)));
                }
            }
        }
    }
}

#[test]
fn coset_sizes_by_counting() {
    for n1 in 1..=24u64 {
        for n2 in 1..=24u64 {
            let map = ClassMap::new(n1, n2).unwrap();
            for c in map.classes() {
                let g = subsignal_geometry(n1, n2, c.rep.0, c.rep.1).unwrap();
                let mut counts = vec![0u64; g.big_d as usize];
                for m in 0..n1 {
                    for n in 0..n2 {
                        counts[g.slot(m, n)] += 1;
                    }
                }
                assert!(counts.iter().all(|&c| c == g.coset_size), "{n1}x{n2} {:?}", c.rep);
            }
        }
    }
}

#[test]
fn subsignal_spectrum_matches_grid() {
    let x = Grid::from_fn(6, 9, |m, n| ((m * 7 + n * 3) % 5) as i64 - 2);
    let full = dft_2d_int::<f64>(&x);
    for c in enumerate_classes(6, 9) {
        let sub = extract_subsignal(&x, c.rep.0, c.rep.1).unwrap();
        let s = dft_1d_int::<f64>(&sub);
        let d = c.big_d;
        for (lam, &(k, l)) in (1..=d).filter(|&v| mod_inverse(v, d).is_some()).zip(&c.orbit) {
            assert!((s[(lam % d) as usize] - full[(k as usize, l as usize)]).abs() < 1e-9);
        }
    }
}

#[test]
fn witnesses_vanish_off_their_orbit() {
    let start = Instant::now();
    for n in 1..=60u64 {
        let x = amb1d_witness(n).unwrap();
        let spec = dft_1d_int::<f64>(&x);
        let scale = spec.iter().map(|c| c.abs()).fold(0.0, f64::max);
        for (k, c) in spec.iter().enumerate() {
            let unit = mod_inverse(k as u64, n).is_some() && (n == 1 || k != 0);
            assert_eq!(c.abs() > 1e-6 * scale, unit, "N={n} k={k}");
        }
    }
    for n1 in 1..=12u64 {
        for n2 in 1..=12u64 {
            let map = ClassMap::new(n1, n2).unwrap();
            for (idx, c) in map.classes().iter().enumerate() {
                let w = amb2d_witness(n1, n2, c.rep.0, c.rep.1).unwrap();
                let spec = dft_2d_int::<f64>(&w);
                let scale = spec.data().iter().map(|c| c.abs()).fold(0.0, f64::max);
                for k in 0..n1 {
                    for l in 0..n2 {
                        let on = map.locate(k, l).0 == idx;
                        let v = spec[(k as usize, l as usize)].abs();
                        assert_eq!(v > 1e-6 * scale, on, "{n1}x{n2} class {:?} at ({k},{l})", c.rep);
                    }
                }
            }
        }
    }
    assert!(start.elapsed().as_secs() < 30);
}

#[test]
fn prime_square_class_counts() {
    for p in [2u64, 3, 5, 7, 11, 13, 23] {
        assert_eq!(count_classes(p, p), (p * p + p - 2) / (p - 1));
    }
}
