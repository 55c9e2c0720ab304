use std::f64::consts::{E, LN_10};

use super::FamilyDElement;
use crate::{Error, Result};

/// The scale `N` of the nice predicate, stored as `ln N` since the intended
/// regime starts at `10^1000`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NiceScale {
    ln_n: f64,
}

impl NiceScale {
    pub fn from_ln(ln_n: f64) -> Result<Self> {
        // N > e^(e^e) iff ln N > e^e.
        if !(ln_n > E.powf(E)) {
            return Err(Error::ScaleTooSmall(ln_n));
        }
        Ok(NiceScale { ln_n })
    }

    pub fn from_log10(log10_n: f64) -> Result<Self> {
        Self::from_ln(log10_n * LN_10)
    }

    pub fn from_value(n: f64) -> Result<Self> {
        Self::from_ln(n.ln())
    }

    pub fn ln_n(&self) -> f64 {
        self.ln_n
    }

    pub fn in_regime(&self) -> bool {
        self.ln_n >= 1000.0 * LN_10
    }

    /// `D_1 = exp((log log N)^(1/10))`.
    pub fn d1(&self) -> f64 {
        self.ln_n.ln().powf(0.1).exp()
    }

    /// `C_0 = sqrt(log log log N)`.
    pub fn c0(&self) -> f64 {
        self.ln_n.ln().ln().sqrt()
    }

    fn lllog(&self) -> f64 {
        self.ln_n.ln().ln()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NiceReport {
    /// Every prime above `D_1` is less than half the next prime.
    pub gap: bool,
    /// The spacing inequality for `1 <= i < r/3`.
    pub regular_spacing: bool,
    /// Smallest index `i` (1-based) in `(sqrt(r)/2, r/2)` with a dominant gap.
    pub large_gap_index: Option<usize>,
    /// `N >= 10^1000`.
    pub in_regime: bool,
    /// Siegel zeros are never searched for; reports carry this as an assumption.
    pub siegel_free_assumed: bool,
}

impl NiceReport {
    pub fn nice(&self) -> bool {
        self.gap && self.regular_spacing && self.large_gap_index.is_some()
    }
}

pub fn is_n_nice(d: &FamilyDElement, scale: NiceScale) -> NiceReport {
    let ps = d.primes();
    let r = ps.len();
    let d1 = scale.d1();
    let c0 = scale.c0();

    let gap = ps
        .windows(2)
        .all(|w| (w[0] as f64) <= d1 || 2 * w[0] < w[1]);

    let regular_spacing = (1..=r).take_while(|&i| 3 * i < r).all(|i| {
        let p = ps[i - 1] as f64;
        let lhs = (0.5 * p.ln().ln() - i as f64).abs();
        lhs < c0.powf(0.2) * (i as f64).max(c0).powf(0.8)
    });

    let lo = (r as f64).sqrt() / 2.0;
    let mut prefix = 0.0f64;
    let mut large_gap_index = None;
    for i in 1..=r {
        let lp = (ps[i - 1] as f64).ln();
        if (i as f64) > lo && 2 * i < r {
            let llp = lp.ln();
            if lp >= llp * llp * scale.lllog() * prefix {
                large_gap_index = Some(i);
                break;
            }
        }
        prefix += lp;
    }

    NiceReport {
        gap,
        regular_spacing,
        large_gap_index,
        in_regime: scale.in_regime(),
        siegel_free_assumed: true,
    }
}
