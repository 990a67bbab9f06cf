//! On-disk instance format.
//!
//! Matrices are stored row-major as parallel real/imaginary arrays; every
//! block has `rows · dim` entries. Floats are written with 17 significant
//! digits so a write/read cycle is lossless.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use bgf_core::kernel::c64;
use bgf_core::{GFrameSystem, Matrix, C64};
use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CliError;
use crate::report::number;

pub const SCHEMA_VERSION: &str = "1";
pub const FIELD: &str = "complex";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSystemFile {
    pub schema_version: String,
    pub dim: usize,
    pub field: String,
    #[serde(deserialize_with = "unique_map")]
    pub systems: BTreeMap<String, SystemEntry>,
    #[serde(
        default,
        deserialize_with = "unique_map",
        skip_serializing_if = "BTreeMap::is_empty"
    )]
    pub vectors: BTreeMap<String, Vec<VectorEntry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemEntry {
    pub blocks: Vec<BlockEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockEntry {
    pub rows: usize,
    #[serde(serialize_with = "reals")]
    pub entries_re: Vec<f64>,
    #[serde(serialize_with = "reals")]
    pub entries_im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorEntry {
    #[serde(serialize_with = "reals")]
    pub entries_re: Vec<f64>,
    #[serde(serialize_with = "reals")]
    pub entries_im: Vec<f64>,
}

fn reals<S: Serializer>(values: &[f64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(|&x| number(x)))
}

/// A JSON object whose keys must be distinct.
fn unique_map<'de, D, V>(d: D) -> Result<BTreeMap<String, V>, D::Error>
where
    D: Deserializer<'de>,
    V: Deserialize<'de>,
{
    struct Unique<V>(PhantomData<V>);

    impl<'de, V: Deserialize<'de>> Visitor<'de> for Unique<V> {
        type Value = BTreeMap<String, V>;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("an object with unique names")
        }

        fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
            let mut out = BTreeMap::new();
            while let Some((key, value)) = access.next_entry::<String, V>()? {
                if out.contains_key(&key) {
                    return Err(serde::de::Error::custom(format!("duplicate name '{key}'")));
                }
                out.insert(key, value);
            }
            Ok(out)
        }
    }

    d.deserialize_map(Unique(PhantomData))
}

impl BlockEntry {
    pub fn from_matrix(m: &Matrix) -> Self {
        let entries = m.row_major();
        BlockEntry {
            rows: m.rows(),
            entries_re: entries.iter().map(|z| z.re).collect(),
            entries_im: entries.iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_matrix(&self, cols: usize, at: &str) -> Result<Matrix, CliError> {
        let expected = self.rows * cols;
        if self.rows == 0 {
            return Err(CliError::input(format!("{at}.rows: must be at least 1")));
        }
        for (name, values) in [
            ("entries_re", &self.entries_re),
            ("entries_im", &self.entries_im),
        ] {
            if values.len() != expected {
                return Err(CliError::input(format!(
                    "{at}.{name}: expected {expected} entries (rows {} x dim {cols}), found {}",
                    self.rows,
                    values.len()
                )));
            }
        }
        Matrix::from_parts(self.rows, cols, &self.entries_re, &self.entries_im)
            .map_err(|e| CliError::input(format!("{at}: {e}")))
    }
}

impl VectorEntry {
    pub fn from_vector(v: &[C64]) -> Self {
        VectorEntry {
            entries_re: v.iter().map(|z| z.re).collect(),
            entries_im: v.iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_vector(&self, dim: usize, at: &str) -> Result<Vec<C64>, CliError> {
        for (name, values) in [
            ("entries_re", &self.entries_re),
            ("entries_im", &self.entries_im),
        ] {
            if values.len() != dim {
                return Err(CliError::input(format!(
                    "{at}.{name}: expected {dim} entries, found {}",
                    values.len()
                )));
            }
            if values.iter().any(|x| !x.is_finite()) {
                return Err(CliError::input(format!("{at}.{name}: non-finite entry")));
            }
        }
        Ok(self
            .entries_re
            .iter()
            .zip(&self.entries_im)
            .map(|(&re, &im)| c64(re, im))
            .collect())
    }
}

impl SystemEntry {
    pub fn from_system(sys: &GFrameSystem) -> Self {
        SystemEntry {
            blocks: sys.blocks().iter().map(BlockEntry::from_matrix).collect(),
        }
    }
}

impl FrameSystemFile {
    pub fn new(dim: usize) -> Self {
        FrameSystemFile {
            schema_version: SCHEMA_VERSION.to_string(),
            dim,
            field: FIELD.to_string(),
            systems: BTreeMap::new(),
            vectors: BTreeMap::new(),
        }
    }

    /// Parses and validates; errors carry the JSON path and line/column.
    pub fn parse(bytes: &[u8]) -> Result<Self, CliError> {
        let file: FrameSystemFile = parse_json(bytes)?;
        file.validate()?;
        Ok(file)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::input(format!(
                "schema_version: expected \"{SCHEMA_VERSION}\", found \"{}\"",
                self.schema_version
            )));
        }
        if self.field != FIELD {
            return Err(CliError::input(format!(
                "field: expected \"{FIELD}\", found \"{}\"",
                self.field
            )));
        }
        if self.dim == 0 {
            return Err(CliError::input("dim: must be at least 1"));
        }
        for name in self.systems.keys() {
            self.system(name)?;
        }
        for name in self.vectors.keys() {
            self.vector_list(name)?;
        }
        Ok(())
    }

    pub fn system(&self, name: &str) -> Result<GFrameSystem, CliError> {
        let entry = self.systems.get(name).ok_or_else(|| {
            let known: Vec<&str> = self.systems.keys().map(String::as_str).collect();
            CliError::input(format!(
                "no system named '{name}' (available: {})",
                known.join(", ")
            ))
        })?;
        if entry.blocks.is_empty() {
            return Err(CliError::input(format!(
                "systems.{name}.blocks: at least one block required"
            )));
        }
        let blocks = entry
            .blocks
            .iter()
            .enumerate()
            .map(|(j, b)| b.to_matrix(self.dim, &format!("systems.{name}.blocks[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        GFrameSystem::new(self.dim, blocks)
            .map_err(|e| CliError::input(format!("systems.{name}: {e}")))
    }

    pub fn vector_list(&self, name: &str) -> Result<Vec<Vec<C64>>, CliError> {
        let list = self.vectors.get(name).ok_or_else(|| {
            let known: Vec<&str> = self.vectors.keys().map(String::as_str).collect();
            CliError::input(format!(
                "no vector list named '{name}' (available: {})",
                known.join(", ")
            ))
        })?;
        if list.is_empty() {
            return Err(CliError::input(format!(
                "vectors.{name}: at least one vector required"
            )));
        }
        list.iter()
            .enumerate()
            .map(|(k, v)| v.to_vector(self.dim, &format!("vectors.{name}[{k}]")))
            .collect()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("instance serializes");
        out.push(b'\n');
        out
    }
}

/// A square operator given as a single block object.
pub fn parse_operator(bytes: &[u8], dim: usize) -> Result<Matrix, CliError> {
    let block: BlockEntry = parse_json(bytes)?;
    if block.rows != dim {
        return Err(CliError::input(format!(
            "rows: expected {dim}, found {}",
            block.rows
        )));
    }
    block.to_matrix(dim, "operator")
}

fn parse_json<T: for<'de> Deserialize<'de>>(bytes: &[u8]) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let value = serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner();
        let path = e.path().to_string();
        let at = if path == "." {
            String::new()
        } else {
            format!(" at {path}")
        };
        CliError::input(format!(
            "malformed JSON{at} (line {}, column {}): {inner}",
            inner.line(),
            inner.column()
        ))
    })?;
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    const INSTANCE: &str = r#"{
        "schema_version": "1", "dim": 2, "field": "complex",
        "systems": {
            "L": {"blocks": [{"rows": 1, "entries_re": [1, 0], "entries_im": [0, 0]}]}
        },
        "vectors": {"e1": [{"entries_re": [1, 0], "entries_im": [0, 0]}]}
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let file = FrameSystemFile::parse(INSTANCE.as_bytes()).unwrap();
        assert_eq!(file.system("L").unwrap().block_dims(), vec![1]);
        assert_eq!(
            file.vector_list("e1").unwrap(),
            vec![vec![c64(1.0, 0.0), c64(0.0, 0.0)]]
        );
        let again = FrameSystemFile::parse(&file.to_bytes()).unwrap();
        assert_eq!(again, file);
    }

    #[test]
    fn floats_round_trip_exactly() {
        let mut file = FrameSystemFile::new(1);
        let x = [0.1 + 0.2, -1.0 / 3.0, 1e-300, f64::MAX];
        file.vectors.insert(
            "v".into(),
            x.iter()
                .map(|&r| VectorEntry {
                    entries_re: vec![r],
                    entries_im: vec![-r],
                })
                .collect(),
        );
        let again = FrameSystemFile::parse(&file.to_bytes()).unwrap();
        assert_eq!(again, file);
    }

    #[test]
    fn entry_count_mismatch_names_the_field() {
        let bad = INSTANCE.replace(
            r#""entries_re": [1, 0], "entries_im": [0, 0]}]}"#,
            r#""entries_re": [1], "entries_im": [0, 0]}]}"#,
        );
        let err = FrameSystemFile::parse(bad.as_bytes()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(
            err.to_string().contains("systems.L.blocks[0].entries_re"),
            "{err}"
        );
    }

    #[test]
    fn syntax_error_reports_line() {
        let bad = INSTANCE.replace("\"dim\": 2,", "\"dim\": 2");
        let err = FrameSystemFile::parse(bad.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn type_error_reports_path() {
        let bad = INSTANCE.replace("\"rows\": 1", "\"rows\": \"one\"");
        let err = FrameSystemFile::parse(bad.as_bytes()).unwrap_err();
        assert!(
            err.to_string().contains("systems.L.blocks[0].rows"),
            "{err}"
        );
    }

    #[test]
    fn rejects_duplicates_unknown_fields_and_versions() {
        let dup = INSTANCE.replace(r#""systems": {"#, r#""systems": {"L": {"blocks": []},"#);
        assert!(FrameSystemFile::parse(dup.as_bytes())
            .unwrap_err()
            .to_string()
            .contains("duplicate"));
        let extra = INSTANCE.replace("\"dim\": 2,", "\"dim\": 2, \"extra\": 0,");
        assert!(FrameSystemFile::parse(extra.as_bytes()).is_err());
        let version = INSTANCE.replace("\"1\"", "\"2\"");
        assert!(FrameSystemFile::parse(version.as_bytes())
            .unwrap_err()
            .to_string()
            .contains("schema_version"));
        let real = INSTANCE.replace("\"complex\"", "\"real\"");
        assert!(FrameSystemFile::parse(real.as_bytes()).is_err());
    }

    #[test]
    fn operator_block_must_be_square() {
        let op = r#"{"rows": 2, "entries_re": [1, 0, 0, 1], "entries_im": [0, 0, 0, 0]}"#;
        assert_eq!(
            parse_operator(op.as_bytes(), 2).unwrap(),
            Matrix::identity(2)
        );
        assert!(parse_operator(op.as_bytes(), 3).is_err());
    }
}
