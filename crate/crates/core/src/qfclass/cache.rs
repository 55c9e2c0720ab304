use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use once_cell::sync::Lazy;
use parking_lot::RwLock;

use super::{ClassGroupOracle, NarrowClassData};
use crate::arith::FamilyDElement;
use crate::{Error, Result};

static CACHE: Lazy<RwLock<HashMap<i64, Arc<NarrowClassData>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

/// Memoised [`super::narrow_class_group`]. Concurrent callers may compute
/// the same entry twice; both results are identical and the first insert wins.
pub fn narrow_class_group_cached(d: &FamilyDElement) -> Result<Arc<NarrowClassData>> {
    let key = super::Discriminant::of_radicand(d.d())?.value();
    if let Some(hit) = CACHE.read().get(&key) {
        return Ok(hit.clone());
    }
    let data = Arc::new(ClassGroupOracle::new(d)?.into_data());
    Ok(CACHE.write().entry(key).or_insert(data).clone())
}

/// Exact on-disk form of the class group summary, one line per field:
/// `delta, h_plus, e_1 e_2 ..., row_1;row_2;...` where each row lists the
/// coordinates of one ramified class separated by spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSummary {
    pub delta: i64,
    pub h_plus: u64,
    pub exponents: Vec<u32>,
    pub ramified: Vec<Vec<u64>>,
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for ClassSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.ramified.iter().map(|r| join(r)).collect();
        write!(
            f,
            "{}, {}, {}, {}",
            self.delta,
            self.h_plus,
            join(&self.exponents),
            rows.join(";")
        )
    }
}

impl FromStr for ClassSummary {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("{what} in class summary line {line:?}"));
        let parts: Vec<&str> = line.splitn(4, ',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(bad("expected four fields"));
        }
        let delta = parts[0].parse().map_err(|_| bad("bad discriminant"))?;
        let h_plus = parts[1].parse().map_err(|_| bad("bad class number"))?;
        let exponents = parts[2]
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("bad exponent")))
            .collect::<Result<Vec<u32>>>()?;
        let ramified = parts[3]
            .split(';')
            .map(|row| {
                row.split_whitespace()
                    .map(|t| t.parse().map_err(|_| bad("bad coordinate")))
                    .collect::<Result<Vec<u64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if ramified.iter().any(|r| r.len() != exponents.len()) {
            return Err(bad("row length differs from the number of exponents"));
        }
        Ok(ClassSummary {
            delta,
            h_plus,
            exponents,
            ramified,
        })
    }
}
