use negpell_core::model::*;
use negpell_core::{Exact, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn rank(rows: &[u64]) -> usize {
    let mut rows = rows.to_vec();
    let mut rank = 0;
    for bit in 0..64 {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && *row >> bit & 1 == 1 {
                *row ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

fn frac(count: u64, total: u64) -> Exact {
    BigRational::new(BigInt::from(count), BigInt::from(total))
}

#[test]
fn rectangular_matches_enumeration() {
    for m in 0..=3u32 {
        for n in 0..=3u32 {
            let total = 1u64 << (m * n);
            let mut counts = vec![0u64; n as usize + 1];
            for bits in 0..total {
                let rows: Vec<u64> = (0..m).map(|i| bits >> (i * n) & ((1 << n) - 1)).collect();
                counts[n as usize - rank(&rows)] += 1;
            }
            for j in 0..=n {
                assert_eq!(
                    p_rect(m, n, j),
                    frac(counts[j as usize], total),
                    "P({m}, {n}, {j})"
                );
            }
        }
    }
}

#[test]
fn symmetric_matches_enumeration() {
    for r in 0..=4u32 {
        let cells: Vec<(u32, u32)> = (0..r).flat_map(|i| (i..r).map(move |j| (i, j))).collect();
        let total = 1u64 << cells.len();
        let mut counts = vec![0u64; r as usize + 1];
        for bits in 0..total {
            let mut rows = vec![0u64; r as usize];
            for (k, &(i, j)) in cells.iter().enumerate() {
                if bits >> k & 1 == 1 {
                    rows[i as usize] |= 1 << j;
                    rows[j as usize] |= 1 << i;
                }
            }
            counts[r as usize - rank(&rows)] += 1;
        }
        for n in 0..=r {
            assert_eq!(
                p_sym(r, n),
                frac(counts[n as usize], total),
                "P_Sym({r}, {n})"
            );
        }
    }
}

#[test]
fn float_and_exact_agree() {
    for m in 0..8 {
        for n in 0..8 {
            for j in 0..=n {
                let e = p_rect(m, n, j).to_f64();
                assert!((p_rect_in::<f64>(m, n, j) - e).abs() < 1e-14);
                assert!((f64::from(p_rect_in::<f32>(m, n, j)) - e).abs() < 1e-6);
            }
        }
    }
    for r in 0..20 {
        assert_eq!(sym_distribution::<Exact>(r).total(), Exact::one());
        assert_eq!(rect_distribution::<Exact>(r, r).total(), Exact::one());
    }
}

#[test]
fn alpha_and_density() {
    let a = alpha::<Exact>(1e-15).unwrap();
    assert!(a.error_bound < 1e-12);
    let v = a.value.to_f64();
    assert_eq!(format!("{v:.5}"), "0.41942");
    let s = stevenhagen_density();
    assert!((s.value.to_f64() - (1.0 - v)).abs() < 1e-9);
    assert!(alpha::<f64>(0.0).is_err());
}

#[test]
fn pell_recursion() {
    for m in 0..=14 {
        check_pell_recursion(m).unwrap();
    }
}

#[test]
fn kernel_rows() {
    let k = markov_kernel::<Exact>(6);
    for n in 0..=6 {
        assert_eq!(k.raw_row_sum(n), Exact::inv_pow2(n as u32));
        let s = k.normalized[n].iter().fold(Exact::zero(), |a, b| a + b);
        assert_eq!(s, Exact::one());
    }
}

fn partitions(total: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if total == 0 {
        out.push(prefix.clone());
        return;
    }
    for e in (1..=total.min(max)).rev() {
        prefix.push(e);
        partitions(total - e, e, prefix, out);
        prefix.pop();
    }
}

#[test]
fn cohen_lenstra_masses_sum_to_one() {
    let mut groups = Vec::new();
    for n in 0..=16 {
        partitions(n, n, &mut Vec::new(), &mut groups);
    }
    let total: f64 = groups.iter().map(|g| cl_mass::<f64>(g).value).sum();
    // The missing mass is that of groups of order above 2^16.
    assert!((1.0 - total) > 0.0 && (1.0 - total) < 1e-4, "{total}");
    assert_eq!(automorphism_count(&[1, 1]), BigInt::from(6));
    assert_eq!(automorphism_count(&[2]), BigInt::from(2));
    assert_eq!(automorphism_count(&[2, 1]), BigInt::from(8));
}

#[test]
fn table_rows_are_consistent() {
    let rows = model_table(3, 4, 3);
    for row in &rows {
        let line = row.to_string();
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0], row.kind);
        assert_eq!(fields.len(), row.params.len() + 4);
    }
    assert!(rows.iter().any(|r| r.kind == "alpha"));
}
