use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::{LabError, Result};

/// A row type with a fixed column list matching its serde field names.
pub trait Record: Serialize + DeserializeOwned {
    const HEADER: &'static [&'static str];
}

/// A named table of CSV cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn from_records<T: Record>(name: &str, records: &[T]) -> Result<Self> {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::new());
        for r in records {
            w.serialize(r)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| LabError::Config(format!("csv buffer: {e}")))?;
        let mut rd = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(bytes.as_slice());
        let rows = rd
            .records()
            .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect::<Vec<_>>()))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if let Some(bad) = rows.iter().find(|r| r.len() != T::HEADER.len()) {
            return Err(LabError::Config(format!(
                "{name}: row {bad:?} does not match header {:?}",
                T::HEADER
            )));
        }
        Ok(Table {
            name: name.into(),
            header: T::HEADER.iter().map(|h| h.to_string()).collect(),
            rows,
        })
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner()
            .map_err(|e| LabError::Config(format!("csv buffer: {e}")))
    }

    pub fn parse(name: &str, bytes: &[u8]) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(bytes);
        let header = rd.headers()?.iter().map(str::to_string).collect();
        let rows = rd
            .records()
            .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect::<Vec<_>>()))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Table {
            name: name.into(),
            header,
            rows,
        })
    }

    pub fn read(name: &str, path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| LabError::io(path, e))?;
        Self::parse(name, &bytes)
    }

    /// Writes `dir/<prefix>-<name>.csv` and returns the path.
    pub fn write(&self, dir: &Path, prefix: &str) -> Result<PathBuf> {
        let path = dir.join(format!("{prefix}-{}.csv", self.name));
        std::fs::write(&path, self.to_csv()?).map_err(|e| LabError::io(&path, e))?;
        Ok(path)
    }

    pub fn decode<T: Record>(&self) -> Result<Vec<T>> {
        let bytes = self.to_csv()?;
        let mut rd = csv::Reader::from_reader(bytes.as_slice());
        Ok(rd
            .deserialize()
            .collect::<std::result::Result<Vec<T>, _>>()?)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, PartialEq, Serialize, Deserialize)]
    struct Row {
        n: u64,
        label: String,
        x: f64,
    }

    impl Record for Row {
        const HEADER: &'static [&'static str] = &["n", "label", "x"];
    }

    #[test]
    fn records_round_trip() {
        let rows = vec![
            Row {
                n: 1,
                label: "a,b".into(),
                x: 0.1 + 0.2,
            },
            Row {
                n: 2,
                label: "\"q\"".into(),
                x: 1e-300,
            },
            Row {
                n: 3,
                label: String::new(),
                x: 0.41942244,
            },
        ];
        let t = Table::from_records("t", &rows).unwrap();
        let back = Table::parse("t", &t.to_csv().unwrap()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.decode::<Row>().unwrap(), rows);
    }

    #[test]
    fn empty_tables_keep_the_header() {
        let t = Table::from_records::<Row>("e", &[]).unwrap();
        let back = Table::parse("e", &t.to_csv().unwrap()).unwrap();
        assert_eq!(back.header, vec!["n", "label", "x"]);
        assert!(back.rows.is_empty());
    }
}
