use negpell_core::arith::{family_d_element, jacobi, sieve_family_d, F2Bit};
use negpell_core::redei::*;

/// Kernel dimension by enumerating every vector.
fn brute_kernel_dim(m: &F2Matrix) -> usize {
    let n = m.ncols();
    let count = (0u64..1 << n)
        .filter(|&v| {
            (0..m.nrows())
                .all(|i| (0..n).filter(|&j| v >> j & 1 == 1 && m.get(i, j)).count() % 2 == 0)
        })
        .count();
    count.trailing_zeros() as usize
}

#[test]
fn rk4_is_the_kernel_of_the_symbol_matrix() {
    for d in sieve_family_d(200_000).iter().filter(|d| d.omega() >= 3) {
        let a = redei_assignment(d);
        let ps = d.primes();
        for i in 0..ps.len() {
            for j in 0..ps.len() {
                if i == j {
                    continue;
                }
                let (lo, hi) = (ps[i.min(j)], ps[i.max(j)]);
                let sign = if lo == 2 {
                    jacobi(2, hi as u128)
                } else {
                    jacobi(lo as i128, hi as u128)
                }
                .unwrap();
                assert_eq!(a.get(i, j), F2Bit::from_sign(sign).unwrap());
            }
        }
        let full = a.matrix();
        for i in 0..ps.len() {
            assert_eq!(full.row(i).count_ones() % 2, 0);
        }
        assert_eq!(
            rk4(d),
            brute_kernel_dim(&a.reduced_matrix()),
            "d = {}",
            d.d()
        );
    }
}

#[test]
fn conic_points_lie_on_the_conic() {
    for (a, b) in [
        (5i64, 13),
        (13, 17),
        (5, 29),
        (2, 17),
        (65, 29),
        (-1, 2),
        (3, 7),
    ] {
        let pts = conic_points(a, b, 8).unwrap();
        if matches!((a, b), (3, 7) | (5, 13)) {
            assert!(pts.is_empty());
            assert_eq!(solve_conic(a, b).unwrap(), ConicSolution::Failure);
            continue;
        }
        assert!(!pts.is_empty(), "({a}, {b})");
        for (x, y, z) in pts {
            assert_eq!(x * x, a as i128 * y * y + b as i128 * z * z);
        }
    }
}

#[test]
fn symbol_is_independent_of_the_solution() {
    for t in [(5u64, 29, 109), (13, 17, 53), (61, 73, 97), (5, 89, 101)] {
        let Ok(t) = RedeiTriple::new(t.0, t.1, t.2) else {
            continue;
        };
        let vals = symbol_candidates(&t, 6).unwrap();
        assert!(vals.len() >= 2, "{t}");
        assert!(vals.windows(2).all(|w| w[0] == w[1]), "{t}: {vals:?}");
    }
}

#[test]
fn reciprocity_fuzz() {
    let recs = fuzz_reciprocity(11, 200, 500).unwrap();
    assert_eq!(recs.len(), 200);
    for r in &recs {
        assert_eq!(r.status, FuzzStatus::Agree, "{r}");
    }
    assert_eq!(fuzz_reciprocity(11, 200, 500).unwrap(), recs);
}

#[test]
fn art2_small_sweep() {
    let sweep = art2_sweep(20_000, 120);
    assert!(sweep.errors.is_empty(), "{:?}", sweep.errors);
    assert!(sweep.checks > 1000);
    assert_eq!(sweep.calibration(), F2Bit::ZERO);
    assert_eq!(
        sweep.mismatches_at(F2Bit::ZERO),
        0,
        "{:?}",
        sweep.first_mismatch
    );
}

#[test]
fn art2_check_single_triple() {
    let t = RedeiTriple::new(5, 29, 109).unwrap();
    let ch = art2_check(&t).unwrap();
    assert!(ch.agrees(F2Bit::ZERO));
    assert!(family_d_element(5 * 29).is_some());
}
