use negpell_core::combi::*;
use negpell_core::{DensityReportF64, Exact};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_sizes(r: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| (1..=max).map(move |n| [p.clone(), vec![n]].concat()))
            .collect();
    }
    out
}

#[test]
fn add_dimension_formula_on_small_spaces() {
    let mut checked = 0;
    for r in 1..=3 {
        for sizes in all_sizes(r, 4) {
            let sp = ProductSpace::with_sizes(&sizes).unwrap();
            for s in 0..1u32 << r {
                let d = add_dim(&sp, s).unwrap();
                assert!(d.agrees(), "sizes {sizes:?}, S = {s:b}: {d:?}");
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 4 * 2 + 16 * 4 + 64 * 8);
}

#[test]
fn random_systems_meet_the_acceptance_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let r = rng.gen_range(1..=3);
        let sizes: Vec<usize> = (0..r).map(|_| rng.gen_range(2..=4)).collect();
        let s = rng.gen_range(0..1u32 << r);
        let density = rng.gen_range(0.2..=1.0);
        let sys = AdditiveSystem::random(
            &mut rng,
            ProductSpace::with_sizes(&sizes).unwrap(),
            s,
            2,
            density,
        )
        .unwrap();
        let v = validate_additive_system(&sys);
        assert!(v.is_valid(), "{:?}", v.violation);
        let rep = acceptance_density_check::<Exact>(&sys).unwrap();
        assert!(rep.pass, "sizes {sizes:?}, S = {s:b}: {rep:?}");
        let f: DensityReportF64 = rep.to_f64();
        assert!(f.lhs >= f.rhs);
    }
}

#[test]
fn legendre_system_is_additive() {
    let sp = ProductSpace::new(vec![vec![5, 13, 17], vec![29, 37, 41], vec![53, 61]]).unwrap();
    for s in [0b011, 0b101, 0b111] {
        let sys = AdditiveSystem::legendre(sp.clone(), s).unwrap();
        assert!(validate_additive_system(&sys).is_valid());
        assert!(acceptance_density_check::<f64>(&sys).unwrap().pass);
    }
    assert!(AdditiveSystem::legendre(ProductSpace::new(vec![vec![4, 5]]).unwrap(), 1).is_err());
}

#[test]
fn corrupted_value_is_reported() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sp = ProductSpace::with_sizes(&[3, 3]).unwrap();
    let mut sys = AdditiveSystem::from_potentials(sp, 0b11, vec![1; 4], vec![true; 9], |_, _| {
        rng.gen::<u64>() & 1
    })
    .unwrap();
    assert!(validate_additive_system(&sys).is_valid());
    let t = 0b01;
    let idx = (0..sys.cube(t).len())
        .find(|&i| !sys.cube(t).point(i).is_degenerate() && sys.in_c(t, i))
        .unwrap();
    let v = sys.value(t, idx);
    sys.set_value(t, idx, v ^ 1);
    let val = validate_additive_system(&sys);
    assert!(
        matches!(val.violation, Some(Violation::Additivity { .. })),
        "{:?}",
        val.violation
    );
    assert!(acceptance_density_check::<Exact>(&sys).is_err());
}

fn subsets(n: usize, b: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == b)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

fn brute_box(sp: &ProductSpace, y: &[bool], b: usize) -> bool {
    let sizes = sp.sizes();
    let choices: Vec<Vec<Vec<usize>>> = sizes.iter().map(|&n| subsets(n, b)).collect();
    let mut pick = vec![0usize; sizes.len()];
    if choices.iter().any(Vec::is_empty) {
        return false;
    }
    loop {
        let zs: Vec<&Vec<usize>> = pick
            .iter()
            .enumerate()
            .map(|(i, &k)| &choices[i][k])
            .collect();
        let mut points = vec![Vec::new()];
        for z in &zs {
            points = points
                .into_iter()
                .flat_map(|p: Vec<usize>| z.iter().map(move |&c| [p.clone(), vec![c]].concat()))
                .collect();
        }
        if points.iter().all(|p| y[sp.index(p)]) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == pick.len() {
                return false;
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn box_search_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let r = rng.gen_range(2..=3);
        let sizes: Vec<usize> = (0..r).map(|_| rng.gen_range(2..=5)).collect();
        let sp = ProductSpace::with_sizes(&sizes).unwrap();
        let p = rng.gen_range(0.3..0.95);
        let y: Vec<bool> = (0..sp.len()).map(|_| rng.gen_bool(p)).collect();
        for b in 1..=2 {
            let found = find_box(&sp, &y, b).unwrap();
            assert_eq!(
                found.is_found(),
                brute_box(&sp, &y, b),
                "sizes {sizes:?}, b = {b}"
            );
            if let BoxSearch::Found(zs) = found {
                assert!(zs.iter().all(|z| z.len() == b));
            }
        }
    }
}

#[test]
fn second_moment_grid() {
    let primes = [5u64, 13, 17, 29, 37, 41, 53, 61];
    for r in 3..=8 {
        for k2 in 1..=r {
            for (k0, k1, p) in [(0, 0, 0), (0, 1, 0), (0, 1, 1), (1, 1, 0), (0, 2, 0)] {
                let params = MomentParams { r, k0, k1, k2, p };
                let x = SymbolData::from_primes(&primes[..r], &[2][..p]).unwrap();
                match permutation_second_moment::<Exact>(params, &x) {
                    Ok(rep) => assert!(rep.pass && rep.first_moment_ok, "{params:?}"),
                    Err(negpell_core::Error::Precondition(_)) => assert!(params.check().is_err()),
                    Err(e) => panic!("{params:?}: {e}"),
                }
            }
        }
    }
}
