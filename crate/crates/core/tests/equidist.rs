use negpell_core::arith::{kronecker, F2Bit};
use negpell_core::equidist::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bit(a: u64, b: u64) -> F2Bit {
    F2Bit::from_sign(kronecker(a as i128, b as u128).unwrap()).unwrap()
}

fn brute_count(pb: &Prebox, c: &SymbolConstraint) -> u64 {
    let mut tuples = vec![Vec::new()];
    for i in 0..pb.r() {
        tuples = tuples
            .into_iter()
            .flat_map(|t: Vec<u64>| {
                pb.set(i)
                    .iter()
                    .map(move |&x| [t.clone(), vec![x]].concat())
            })
            .collect();
    }
    tuples
        .iter()
        .filter(|x| {
            c.pairs.iter().all(|&((i, j), v)| bit(x[i], x[j]) == v)
                && c.aux.iter().all(|&((i, q), v)| bit(x[i], pb.aux()[q]) == v)
        })
        .count() as u64
}

fn random_constraint<R: Rng>(rng: &mut R, r: usize, p: usize) -> SymbolConstraint {
    let mut c = SymbolConstraint::none();
    for i in 0..r {
        for j in i + 1..r {
            if rng.gen_bool(0.6) {
                c.pairs
                    .push(((i, j), F2Bit::new(rng.gen_range(0..2)).unwrap()));
            }
        }
        for q in 0..p {
            if rng.gen_bool(0.5) {
                c.aux
                    .push(((i, q), F2Bit::new(rng.gen_range(0..2)).unwrap()));
            }
        }
    }
    c
}

#[test]
fn counts_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let boxes = [
        build_prebox(&[(5, 60), (60, 140)], &[2, 5]).unwrap(),
        build_prebox(&[(13, 40), (40, 90), (90, 160)], &[5, 13]).unwrap(),
        build_prebox(&[(2, 30), (30, 70), (70, 110), (110, 150)], &[]).unwrap(),
    ];
    for pb in &boxes {
        for _ in 0..40 {
            let c = random_constraint(&mut rng, pb.r(), pb.aux().len());
            let rep = count_x_a(pb, &c).unwrap();
            assert_eq!(rep.count, brute_count(pb, &c), "{c:?}");
            assert_eq!(rep.total as u128, pb.total());
        }
    }
}

#[test]
fn assignments_partition_the_prebox() {
    let pb = build_prebox(&[(13, 80), (80, 200), (200, 300)], &[2, 5]).unwrap();
    let shape = SymbolConstraint::full(3, 2);
    let (sum, total) = partition_sum(&pb, &shape).unwrap();
    assert_eq!(sum, total);
    let mut dup = shape.clone();
    dup.pairs.push(dup.pairs[0]);
    assert!(partition_sum(&pb, &dup).is_err());
}

#[test]
fn contradictory_duplicates_give_zero() {
    let pb = build_prebox(&[(10, 100), (100, 200)], &[]).unwrap();
    let c = SymbolConstraint {
        pairs: vec![((0, 1), F2Bit::ZERO), ((0, 1), F2Bit::ONE)],
        aux: vec![],
    };
    assert_eq!(count_x_a(&pb, &c).unwrap().count, 0);
    let same = SymbolConstraint {
        pairs: vec![((0, 1), F2Bit::ONE), ((0, 1), F2Bit::ONE)],
        aux: vec![],
    };
    let single = SymbolConstraint {
        pairs: vec![((0, 1), F2Bit::ONE)],
        aux: vec![],
    };
    assert_eq!(
        count_x_a(&pb, &same).unwrap(),
        count_x_a(&pb, &single).unwrap()
    );
}

#[test]
fn interval_sizes_are_exact() {
    let t = interval_with_count(1000, 50).unwrap();
    let pb = build_prebox(&[(1000, t)], &[]).unwrap();
    assert_eq!(pb.sizes(), vec![50]);
    assert!(build_prebox(&[(1000, t - 1)], &[]).unwrap().sizes()[0] < 50);
}

#[test]
fn scans_are_reproducible_and_formatted() {
    let s = 100;
    let t1 = interval_with_count(s, 60).unwrap();
    let t2 = interval_with_count(t1, 60).unwrap();
    let pb = build_prebox(&[(s, t1), (t1, t2)], &[]).unwrap();
    let shape = SymbolConstraint::full(2, 0);
    let a = scan_deviation(&pb, &shape, 10, 4).unwrap();
    let b = scan_deviation(&pb, &shape, 10, 4).unwrap();
    assert_eq!(a, b);
    let line = a.reports[0].to_string();
    let fields: Vec<&str> = line.split(',').collect();
    assert_eq!(fields.len(), 6);
    assert_eq!(fields[0], "2");
    assert_eq!(fields[1], "60x60");
    assert_eq!(fields[2], "1");
}

#[test]
fn bad_preboxes_are_rejected() {
    assert!(build_prebox(&[], &[]).is_err());
    assert!(build_prebox(&[(20, 30), (25, 40)], &[]).is_err());
    assert!(build_prebox(&[(20, 30)], &[3]).is_err());
    assert!(build_prebox(&[(20, 30)], &[29]).is_err());
    assert!(build_prebox(&[(13, 16)], &[]).is_err());
    let pb = build_prebox(&[(20, 30)], &[]).unwrap();
    let c = SymbolConstraint {
        pairs: vec![((0, 1), F2Bit::ZERO)],
        aux: vec![],
    };
    assert!(count_x_a(&pb, &c).is_err());
}
