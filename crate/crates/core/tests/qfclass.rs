use negpell_core::arith::{family_d_element, sieve_family_d};
use negpell_core::pell::neg_pell_soluble;
use negpell_core::qfclass::*;
use negpell_core::redei::rk4;
use rayon::prelude::*;

fn discriminant(d: u64) -> u64 {
    if d % 4 == 1 {
        d
    } else {
        4 * d
    }
}

#[test]
fn oracle_agrees_with_fast_paths() {
    let bound = 100_000;
    let ds: Vec<_> = sieve_family_d(bound)
        .into_iter()
        .filter(|d| discriminant(d.d()) <= bound)
        .collect();
    assert!(ds.len() > 10_000);
    let bad: Vec<String> = ds
        .par_iter()
        .filter_map(|d| {
            let data = narrow_class_group(d).unwrap();
            let art = artin_sequence(d).unwrap();
            let pell = neg_pell_soluble(d.d()).unwrap();
            let ok = data.sqrt_d_class_trivial() == pell
                && art.pellian == pell
                && data.rk4() == rk4(d)
                && data.rank_2k(1) == d.omega() - 1
                && (data.ordinary_two_sylow_order() == data.two_sylow_order()) == pell;
            (!ok).then(|| format!("d = {}", d.d()))
        })
        .collect();
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn small_fields_by_hand() {
    // Q(sqrt 34): the unit has norm +1 and the narrow class group is Z/4.
    let d = family_d_element(34).unwrap();
    let data = narrow_class_group(&d).unwrap();
    assert_eq!(
        (data.delta, data.h_plus, data.exponents.clone()),
        (136, 4, vec![2])
    );
    assert!(!data.sqrt_d_class_trivial());
    assert!(!neg_pell_soluble(34).unwrap());
    for p in [5u64, 13, 17, 29, 37, 41] {
        let d = family_d_element(p).unwrap();
        let data = narrow_class_group(&d).unwrap();
        assert!(data.exponents.is_empty());
        assert!(artin_sequence(&d).unwrap().pellian);
    }
}

#[test]
fn class_number_matches_reduced_cycles() {
    for d in [5u64, 10, 34, 65, 146, 221, 305, 410, 1105] {
        let disc = Discriminant::of_radicand(d).unwrap();
        let g = ClassGroup::new(disc).unwrap();
        let forms = reduced_forms(&disc);
        assert_eq!(g.reduced_form_count(), forms.len());
        let mut covered = 0;
        for c in 0..g.order() as u32 {
            let cycle = g.cycle(c).unwrap();
            covered += cycle.len();
            for f in cycle {
                assert_eq!(g.class_of(f).unwrap(), c);
            }
        }
        assert_eq!(covered, forms.len(), "d = {d}");
    }
}

#[test]
fn summary_lines_round_trip() {
    for d in [34u64, 1105, 5 * 13 * 17 * 29] {
        let s = narrow_class_group(&family_d_element(d).unwrap())
            .unwrap()
            .summary();
        let line = s.to_string();
        assert_eq!(line.parse::<ClassSummary>().unwrap(), s);
    }
}

#[test]
fn rejects_out_of_family() {
    assert!(Discriminant::new(14).is_err());
    assert!(Discriminant::new(16).is_err());
    assert!(Discriminant::new(-4).is_err());
    assert!(family_d_element(21).is_none());
}
