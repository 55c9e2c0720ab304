use std::collections::{BTreeSet, HashMap};

use super::forms::{compose, reduce_form, reduced_forms, rho_step, Discriminant, QuadForm};
use crate::{Error, Result};

/// Narrow class group realised as the cycles of reduced forms.
///
/// Classes are numbered by the first reduced form (in `(a, b)` order) of
/// their cycle, so the numbering only depends on the discriminant.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    disc: Discriminant,
    forms: Vec<QuadForm>,
    cycle_of: Vec<u32>,
    reps: Vec<QuadForm>,
    identity: u32,
}

impl ClassGroup {
    pub fn new(disc: Discriminant) -> Result<Self> {
        let forms = reduced_forms(&disc);
        const UNSET: u32 = u32::MAX;
        let mut cycle_of = vec![UNSET; forms.len()];
        let mut reps = Vec::new();
        for start in 0..forms.len() {
            if cycle_of[start] != UNSET {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(forms[start]);
            let mut idx = start;
            loop {
                cycle_of[idx] = id;
                let next = rho_step(forms[idx], &disc)?;
                idx = forms
                    .binary_search(&next)
                    .map_err(|_| Error::ClassGroupInconsistent {
                        delta: disc.value(),
                        what: format!("rho image {next} is not in the reduced list"),
                    })?;
                if cycle_of[idx] == id {
                    break;
                }
                if cycle_of[idx] != UNSET {
                    return Err(Error::ClassGroupInconsistent {
                        delta: disc.value(),
                        what: "rho cycles overlap".into(),
                    });
                }
            }
        }
        let mut g = ClassGroup {
            disc,
            forms,
            cycle_of,
            reps,
            identity: 0,
        };
        g.identity = g.class_of(QuadForm::principal(&disc))?;
        Ok(g)
    }

    pub fn discriminant(&self) -> &Discriminant {
        &self.disc
    }

    /// Narrow class number.
    pub fn order(&self) -> u64 {
        self.reps.len() as u64
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn representative(&self, class: u32) -> QuadForm {
        self.reps[class as usize]
    }

    pub fn reduced_form_count(&self) -> usize {
        self.forms.len()
    }

    /// Reduced forms of one cycle, in `rho` order starting at the representative.
    pub fn cycle(&self, class: u32) -> Result<Vec<QuadForm>> {
        let start = self.reps[class as usize];
        let mut out = vec![start];
        let mut f = rho_step(start, &self.disc)?;
        while f != start {
            out.push(f);
            f = rho_step(f, &self.disc)?;
        }
        Ok(out)
    }

    pub fn class_of(&self, f: QuadForm) -> Result<u32> {
        let g = reduce_form(f, &self.disc)?;
        self.forms
            .binary_search(&g)
            .map(|i| self.cycle_of[i])
            .map_err(|_| Error::ClassGroupInconsistent {
                delta: self.disc.value(),
                what: format!("reduced form {g} missing from the enumeration"),
            })
    }

    pub fn mul(&self, x: u32, y: u32) -> Result<u32> {
        let f = compose(self.reps[x as usize], self.reps[y as usize], &self.disc)?;
        self.class_of(f)
    }

    pub fn inverse(&self, x: u32) -> Result<u32> {
        let f = self.reps[x as usize];
        self.class_of(QuadForm::new(f.c, f.b, f.a))
    }

    pub fn pow(&self, x: u32, mut n: u64) -> Result<u32> {
        let mut acc = self.identity;
        let mut base = x;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base)?;
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(base, base)?;
            }
        }
        Ok(acc)
    }

    pub fn element_order(&self, x: u32) -> Result<u64> {
        let mut y = x;
        let mut n = 1;
        while y != self.identity {
            y = self.mul(y, x)?;
            n += 1;
            if n > self.order() {
                return Err(self.inconsistent("element order exceeds the group order"));
            }
        }
        Ok(n)
    }

    fn inconsistent(&self, what: &str) -> Error {
        Error::ClassGroupInconsistent {
            delta: self.disc.value(),
            what: what.into(),
        }
    }

    pub fn two_sylow(&self) -> Result<TwoSylow> {
        TwoSylow::new(self)
    }
}

/// The 2-Sylow subgroup with a basis of cyclic factors.
#[derive(Clone, Debug)]
pub struct TwoSylow {
    /// Exponents `e_1 >= e_2 >= ...` of the cyclic orders `2^{e_i}`.
    pub exponents: Vec<u32>,
    /// Class ids of the basis elements.
    pub generators: Vec<u32>,
    coords: HashMap<u32, Vec<u64>>,
    /// Exponent `m` with `x^m` the projection of `x` onto the 2-Sylow.
    projector: u64,
}

impl TwoSylow {
    fn new(g: &ClassGroup) -> Result<Self> {
        let h = g.order();
        let e = h.trailing_zeros();
        let h_odd = h >> e;
        let modulus = 1u64 << e;
        // Inverse of h_odd modulo 2^e by Newton iteration.
        let mut inv = 1u64;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(h_odd.wrapping_mul(inv)));
        }
        let projector = h_odd * (inv & (modulus - 1));

        let mut elements = BTreeSet::new();
        for x in 0..h as u32 {
            elements.insert(g.pow(x, h_odd)?);
        }
        if elements.len() as u64 != modulus {
            return Err(g.inconsistent(&format!(
                "2-Sylow has {} elements, expected {modulus}",
                elements.len()
            )));
        }

        let mut coords: HashMap<u32, Vec<u64>> = HashMap::new();
        coords.insert(g.identity(), Vec::new());
        let mut exponents = Vec::new();
        let mut generators = Vec::new();
        let mut orders: Vec<u64> = Vec::new();

        while (coords.len() as u64) < modulus {
            // Element of largest order modulo the current subgroup H.
            let mut best: Option<(u32, u32)> = None;
            for &x in &elements {
                if coords.contains_key(&x) {
                    continue;
                }
                let mut y = x;
                let mut k = 0u32;
                while !coords.contains_key(&y) {
                    y = g.mul(y, y)?;
                    k += 1;
                }
                if best.map_or(true, |(_, bk)| k > bk) {
                    best = Some((x, k));
                }
            }
            let (x, k) = best.expect("H is a proper subgroup");
            let q = 1u64 << k;
            let xq = g.pow(x, q)?;
            let t = coords[&xq].clone();
            // Every coordinate of x^q is divisible by q; dividing it out
            // yields a complement element of exact order q.
            let mut adjust = g.identity();
            for (i, &ti) in t.iter().enumerate() {
                if ti % q != 0 {
                    return Err(g.inconsistent("2-Sylow basis step failed divisibility"));
                }
                let c = (orders[i] - ti / q) % orders[i];
                adjust = g.mul(adjust, g.pow(generators[i], c)?)?;
            }
            let gen = g.mul(x, adjust)?;
            if g.pow(gen, q)? != g.identity() {
                return Err(g.inconsistent("adjusted generator has the wrong order"));
            }

            let old: Vec<(u32, Vec<u64>)> = coords.iter().map(|(&c, v)| (c, v.clone())).collect();
            let mut power = g.identity();
            for j in 0..q {
                for (h_el, v) in &old {
                    let el = g.mul(*h_el, power)?;
                    let mut w = v.clone();
                    w.push(j);
                    if coords.insert(el, w).is_some() && j > 0 {
                        return Err(g.inconsistent("complement intersects H"));
                    }
                }
                power = g.mul(power, gen)?;
            }
            generators.push(gen);
            exponents.push(k);
            orders.push(q);
        }

        Ok(TwoSylow {
            exponents,
            generators,
            coords,
            projector,
        })
    }

    pub fn order(&self) -> u64 {
        1u64 << self.exponents.iter().sum::<u32>()
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// `dim 2^{k-1} Cl[2^k]`.
    pub fn rank_2k(&self, k: u32) -> usize {
        self.exponents.iter().filter(|&&e| e >= k).count()
    }

    /// Coordinates of a 2-Sylow element.
    pub fn coords(&self, class: u32) -> Option<&[u64]> {
        self.coords.get(&class).map(|v| v.as_slice())
    }

    /// Coordinates of the 2-part of an arbitrary class.
    pub fn project(&self, g: &ClassGroup, class: u32) -> Result<Vec<u64>> {
        let y = g.pow(class, self.projector)?;
        self.coords(y)
            .map(|c| c.to_vec())
            .ok_or_else(|| g.inconsistent("projection left the 2-Sylow"))
    }

    pub fn element(&self, g: &ClassGroup, coords: &[u64]) -> Result<u32> {
        let mut acc = g.identity();
        for (i, &c) in coords.iter().enumerate() {
            acc = g.mul(acc, g.pow(self.generators[i], c)?)?;
        }
        Ok(acc)
    }
}
