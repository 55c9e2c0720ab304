use negpell_core::arith::*;
use proptest::prelude::*;

fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[test]
fn sieve_matches_trial_division() {
    let limit = 100_000;
    let fast: Vec<u64> = sieve_family_d(limit)
        .iter()
        .map(FamilyDElement::d)
        .collect();
    let slow: Vec<u64> = (2..limit)
        .filter(|&d| {
            let f = trial_division(d);
            f.iter().all(|&(p, e)| e == 1 && (p % 4 == 1 || p == 2))
        })
        .collect();
    assert_eq!(fast, slow);
    assert_eq!(&fast[..8], &[2, 5, 10, 13, 17, 26, 29, 34]);
}

#[test]
fn segmented_sieve_agrees_with_membership() {
    let mut seen = Vec::new();
    for_each_family_d_in(1_000_000, 1_010_000, |e| seen.push(e));
    let direct: Vec<FamilyDElement> = (1_000_000..1_010_000)
        .filter_map(family_d_element)
        .collect();
    assert_eq!(seen, direct);
    for e in &seen {
        assert_eq!(e.primes().iter().product::<u64>(), e.d());
    }
}

#[test]
fn factor_agrees_with_trial_division() {
    for n in (2u64..20_000).chain([600_851_475_143, 1_000_000_007 * 998_244_353]) {
        let f = factor(n as u128);
        let got: Vec<(u64, u32)> = f.factors().iter().map(|&(p, e)| (p as u64, e)).collect();
        if n < 1 << 40 {
            assert_eq!(got, trial_division(n), "n = {n}");
        } else {
            assert_eq!(got, vec![(998_244_353, 1), (1_000_000_007, 1)]);
        }
    }
}

#[test]
fn nice_example_against_direct_evaluation() {
    let d = family_d_element(2 * 5 * 13 * 17 * 29 * 37).unwrap();
    let scale = NiceScale::from_log10(1000.0).unwrap();
    let ln_n = 1000.0 * std::f64::consts::LN_10;
    let d1 = ln_n.ln().powf(0.1).exp();
    let c0 = ln_n.ln().ln().sqrt();
    assert!((scale.d1() - d1).abs() < 1e-12 && (d1 - 3.411).abs() < 1e-3);
    assert!((scale.c0() - c0).abs() < 1e-12 && (c0 - 1.4306).abs() < 1e-4);

    // 2 is below D_1 but 13 is not less than half of 17.
    let ps = [2.0f64, 5.0, 13.0, 17.0, 29.0, 37.0];
    let gap = ps.windows(2).all(|w| w[0] <= d1 || 2.0 * w[0] < w[1]);
    // Only i = 1 satisfies 3i < 6.
    let spacing = (0.5 * ps[0].ln().ln() - 1.0).abs() < c0.powf(0.2) * c0.powf(0.8);

    let rep = is_n_nice(&d, scale);
    assert_eq!(rep.gap, gap);
    assert!(!gap);
    assert_eq!(rep.regular_spacing, spacing);
    assert!(spacing);
    assert_eq!(rep.large_gap_index, Some(2));
    assert!(rep.in_regime && rep.siegel_free_assumed && !rep.nice());
}

proptest! {
    #[test]
    fn jacobi_is_multiplicative_in_the_top(a in -10_000i128..10_000, b in -10_000i128..10_000, n in 0u128..5_000) {
        let n = 2 * n + 1;
        prop_assert_eq!(jacobi(a * b, n).unwrap(), jacobi(a, n).unwrap() * jacobi(b, n).unwrap());
    }

    #[test]
    fn jacobi_is_multiplicative_in_the_bottom(a in -10_000i128..10_000, m in 0u128..2_000, n in 0u128..2_000) {
        let (m, n) = (2 * m + 1, 2 * n + 1);
        prop_assert_eq!(jacobi(a, m * n).unwrap(), jacobi(a, m).unwrap() * jacobi(a, n).unwrap());
    }

    #[test]
    fn quadratic_reciprocity(m in 0u128..50_000, n in 0u128..50_000) {
        let (m, n) = (2 * m + 3, 2 * n + 3);
        let (x, y) = (jacobi(m as i128, n).unwrap(), jacobi(n as i128, m).unwrap());
        if x != 0 {
            let sign = if (m % 4 == 3) && (n % 4 == 3) { -1 } else { 1 };
            prop_assert_eq!(x * y, sign);
        }
    }

    #[test]
    fn legendre_is_euler(a in 0i128..100_000, idx in 0usize..40) {
        let primes = [3u128, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73,
            79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179];
        let p = primes[idx];
        let e = pow_mod(a as u128 % p, (p - 1) / 2, p);
        let expect = if e == 0 { 0 } else if e == 1 { 1 } else { -1 };
        prop_assert_eq!(legendre(a, p).unwrap(), expect);
    }

    #[test]
    fn sign_isomorphism_round_trips(b in 0u8..2) {
        let bit = F2Bit::new(b).unwrap();
        prop_assert_eq!(F2Bit::from_sign(bit.iota()).unwrap(), bit);
    }
}
