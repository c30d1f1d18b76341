//! File formats: JSON tensor documents (full 3x3x3 or compact 3x6), CSV
//! batch rows, and report documents keyed by the stable formula ids.
//!
//! Numbers are serialized with 17 significant digits so parsing a
//! serialized document reproduces every value bit-exactly.

use crate::invariants::{index_of, TABLE};
use crate::tensor::{PiezoTensor, Tensor3};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;

/// Errors from reading or validating tensor files.
#[derive(Debug)]
pub enum ParseError {
    Io(std::io::Error),
    Json(serde_json::Error),
    /// Malformed number in a CSV cell, with 1-based row and column.
    Number { row: usize, col: usize, text: String },
    /// Wrong number of values in a CSV row.
    RowLength { row: usize, expected: usize, found: usize },
    /// Array dimensions are not 3x3x3 / 3x6.
    Shape { what: &'static str, expected: String, found: String },
    /// Full-array document violates the last-two-index symmetry.
    Symmetry { i: usize, j: usize, k: usize, deviation: f64 },
    /// Document carries neither (or both of) the `full` and `compact` forms.
    Form(String),
    /// A report references an id outside the 260-entry registry.
    UnknownId(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Io(e) => write!(f, "io error: {e}"),
            ParseError::Json(e) => write!(f, "json error: {e}"),
            ParseError::Number { row, col, text } => {
                write!(f, "row {row}, column {col}: malformed number {text:?}")
            }
            ParseError::RowLength { row, expected, found } => {
                write!(f, "row {row}: expected {expected} values, found {found}")
            }
            ParseError::Shape { what, expected, found } => {
                write!(f, "{what}: expected shape {expected}, found {found}")
            }
            ParseError::Symmetry { i, j, k, deviation } => write!(
                f,
                "symmetry violation at ({i},{j},{k}): |P_ijk - P_ikj| = {deviation:.3e} exceeds 1e-12"
            ),
            ParseError::Form(msg) => write!(f, "{msg}"),
            ParseError::UnknownId(id) => write!(f, "unknown invariant id {id:?}"),
        }
    }
}

impl std::error::Error for ParseError {}

impl From<std::io::Error> for ParseError {
    fn from(e: std::io::Error) -> Self {
        ParseError::Io(e)
    }
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        ParseError::Json(e)
    }
}

/// Requested interpretation of a tensor document.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    /// Accept whichever single form the document carries.
    #[default]
    Auto,
    Full,
    Compact,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Format::Auto),
            "full" => Ok(Format::Full),
            "compact" => Ok(Format::Compact),
            other => Err(format!("unknown format {other:?} (expected auto|full|compact)")),
        }
    }
}

/// A single tensor on disk: either a full 3x3x3 array (validated for the
/// last-two-index symmetry) or a compact 3x6 matrix with columns
/// (jk) = 11, 22, 33, 23, 13, 12.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TensorDocument {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub metadata: Option<BTreeMap<String, serde_json::Value>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub full: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub compact: Option<Vec<Vec<f64>>>,
}

impl TensorDocument {
    /// Builds a compact-form document.
    pub fn from_tensor(p: &PiezoTensor, name: Option<String>) -> TensorDocument {
        TensorDocument {
            name,
            metadata: None,
            full: None,
            compact: Some(p.rows().iter().map(|r| r.to_vec()).collect()),
        }
    }

    /// Builds a full-form document.
    pub fn from_tensor_full(p: &PiezoTensor, name: Option<String>) -> TensorDocument {
        let t = p.to_tensor3();
        TensorDocument {
            name,
            metadata: None,
            full: Some(
                t.0.iter()
                    .map(|m| m.iter().map(|r| r.to_vec()).collect())
                    .collect(),
            ),
            compact: None,
        }
    }

    /// Validates the document under the requested format and converts it.
    pub fn to_tensor(&self, format: Format) -> Result<PiezoTensor, ParseError> {
        let use_full = match (format, &self.full, &self.compact) {
            (Format::Full, Some(_), _) => true,
            (Format::Full, None, _) => {
                return Err(ParseError::Form("full form requested but document has no \"full\" field".into()))
            }
            (Format::Compact, _, Some(_)) => false,
            (Format::Compact, _, None) => {
                return Err(ParseError::Form("compact form requested but document has no \"compact\" field".into()))
            }
            (Format::Auto, Some(_), Some(_)) => {
                return Err(ParseError::Form(
                    "document carries both \"full\" and \"compact\"; pass an explicit format".into(),
                ))
            }
            (Format::Auto, Some(_), None) => true,
            (Format::Auto, None, Some(_)) => false,
            (Format::Auto, None, None) => {
                return Err(ParseError::Form("document carries neither \"full\" nor \"compact\"".into()))
            }
        };
        if use_full {
            let full = self.full.as_ref().unwrap();
            let mut t = Tensor3::ZERO;
            if full.len() != 3 {
                return Err(shape_err("full array", "3x3x3", format!("{} slabs", full.len())));
            }
            for (i, slab) in full.iter().enumerate() {
                if slab.len() != 3 {
                    return Err(shape_err("full array", "3x3x3", format!("slab {} has {} rows", i + 1, slab.len())));
                }
                for (j, row) in slab.iter().enumerate() {
                    if row.len() != 3 {
                        return Err(shape_err(
                            "full array",
                            "3x3x3",
                            format!("slab {}, row {} has {} entries", i + 1, j + 1, row.len()),
                        ));
                    }
                    for (k, &x) in row.iter().enumerate() {
                        t.0[i][j][k] = x;
                    }
                }
            }
            let scale = t.norm().max(1.0);
            for i in 0..3 {
                for j in 0..3 {
                    for k in (j + 1)..3 {
                        let dev = (t.0[i][j][k] - t.0[i][k][j]).abs();
                        if dev > 1e-12 * scale {
                            return Err(ParseError::Symmetry { i: i + 1, j: j + 1, k: k + 1, deviation: dev });
                        }
                    }
                }
            }
            Ok(PiezoTensor::from_tensor3(&t))
        } else {
            let compact = self.compact.as_ref().unwrap();
            if compact.len() != 3 {
                return Err(shape_err("compact matrix", "3x6", format!("{} rows", compact.len())));
            }
            let mut rows = [[0.0; 6]; 3];
            for (i, row) in compact.iter().enumerate() {
                if row.len() != 6 {
                    return Err(shape_err("compact matrix", "3x6", format!("row {} has {} entries", i + 1, row.len())));
                }
                rows[i].copy_from_slice(row);
            }
            Ok(PiezoTensor::new(rows))
        }
    }
}

fn shape_err(what: &'static str, expected: &str, found: String) -> ParseError {
    ParseError::Shape {
        what,
        expected: expected.to_string(),
        found,
    }
}

/// Reads and validates a tensor document from a JSON file.
pub fn parse_tensor(path: &Path, format: Format) -> Result<(TensorDocument, PiezoTensor), ParseError> {
    let text = std::fs::read_to_string(path)?;
    let doc: TensorDocument = serde_json::from_str(&text)?;
    let p = doc.to_tensor(format)?;
    Ok((doc, p))
}

// ---------------------------------------------------------------------------
// 17-significant-digit JSON output
// ---------------------------------------------------------------------------

struct SigDigits;

impl serde_json::ser::Formatter for SigDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()> {
        if !first {
            writer.write_all(b", ")?;
        }
        Ok(())
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()> {
        if !first {
            writer.write_all(b", ")?;
        }
        Ok(())
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        writer.write_all(b": ")
    }
}

/// Serializes any value to JSON with floats at 17 significant digits.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String, ParseError> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json writes utf-8"))
}

/// Writes a value as JSON to a file (or returns the string for stdout use).
pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), ParseError> {
    let s = to_json_string(value)?;
    std::fs::write(path, s + "\n")?;
    Ok(())
}

// ---------------------------------------------------------------------------
// CSV batch mode
// ---------------------------------------------------------------------------

/// Reads a CSV batch: one tensor per row, 18 comma-separated values in the
/// compact row-major order
/// `P111, P122, P133, P123, P113, P112, P211, ..., P312`.
/// Blank lines and lines starting with `#` are skipped; names default to
/// `row<k>` counting data rows from 1.
pub fn read_csv_batch(path: &Path) -> Result<Vec<(String, PiezoTensor)>, ParseError> {
    let text = std::fs::read_to_string(path)?;
    parse_csv_batch(&text)
}

/// As [`read_csv_batch`], from a string.
pub fn parse_csv_batch(text: &str) -> Result<Vec<(String, PiezoTensor)>, ParseError> {
    let mut out = Vec::new();
    let mut data_row = 0usize;
    for (line_no, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        data_row += 1;
        let cells: Vec<&str> = trimmed.split(',').map(|c| c.trim()).collect();
        if cells.len() != 18 {
            return Err(ParseError::RowLength {
                row: line_no + 1,
                expected: 18,
                found: cells.len(),
            });
        }
        let mut flat = [0.0; 18];
        for (col, (slot, cell)) in flat.iter_mut().zip(cells.iter()).enumerate() {
            *slot = cell.parse::<f64>().map_err(|_| ParseError::Number {
                row: line_no + 1,
                col: col + 1,
                text: cell.to_string(),
            })?;
        }
        out.push((format!("row{data_row}"), PiezoTensor::from_flat(&flat)));
    }
    Ok(out)
}

/// One CSV line in the batch order, with 17 significant digits.
pub fn csv_line(p: &PiezoTensor) -> String {
    p.to_flat()
        .iter()
        .map(|x| format!("{x:.16e}"))
        .collect::<Vec<_>>()
        .join(",")
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

/// A single invariant value keyed by its stable id.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvariantEntry {
    pub id: String,
    pub degree: u32,
    pub value: f64,
}

/// Per-tensor analysis results; sections are filled by the subcommand that
/// produced the report.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct TensorReport {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub invariants: Option<Vec<InvariantEntry>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree_counts: Option<BTreeMap<u32, usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub case: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub canonical: Option<CanonicalSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residuals: Option<Vec<ResidualEntry>>,
}

/// Canonical-form section of a report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CanonicalSection {
    pub rotation: Vec<Vec<f64>>,
    pub a: [f64; 7],
    pub u: [f64; 3],
    pub d: [f64; 5],
    pub v: [f64; 3],
    pub recovered_a: [f64; 7],
}

/// One residual line of an orbit comparison.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub id: String,
    pub residual: f64,
}

/// A batch report.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tensors: Vec<TensorReport>,
}

impl ReportDocument {
    /// Checks that every invariant id in the report exists in the registry.
    pub fn validate_ids(&self) -> Result<(), ParseError> {
        for t in &self.tensors {
            for entry in t.invariants.iter().flatten() {
                if index_of(&entry.id).is_none() {
                    return Err(ParseError::UnknownId(entry.id.clone()));
                }
            }
            for entry in t.residuals.iter().flatten() {
                if index_of(&entry.id).is_none() {
                    return Err(ParseError::UnknownId(entry.id.clone()));
                }
            }
        }
        Ok(())
    }
}

/// The invariant section of a report for one tensor, in table order.
pub fn invariant_entries(values: &crate::invariants::InvariantVector) -> Vec<InvariantEntry> {
    TABLE
        .iter()
        .zip(values.values.iter())
        .map(|(d, &value)| InvariantEntry {
            id: d.id.to_string(),
            degree: d.degree,
            value,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::sample;

    #[test]
    fn compact_round_trip_bit_exact() {
        let mut rng = sample::rng(100);
        for _ in 0..20 {
            let p = sample::piezo(&mut rng);
            let doc = TensorDocument::from_tensor(&p, Some("t".into()));
            let text = to_json_string(&doc).unwrap();
            let doc2: TensorDocument = serde_json::from_str(&text).unwrap();
            assert_eq!(doc, doc2);
            assert_eq!(doc2.to_tensor(Format::Auto).unwrap(), p);
        }
    }

    #[test]
    fn full_round_trip_and_symmetry_validation() {
        let mut rng = sample::rng(101);
        let p = sample::piezo(&mut rng);
        let doc = TensorDocument::from_tensor_full(&p, None);
        let text = to_json_string(&doc).unwrap();
        let doc2: TensorDocument = serde_json::from_str(&text).unwrap();
        let q = doc2.to_tensor(Format::Auto).unwrap();
        assert_eq!(p, q);

        // break symmetry by 1e-3: rejected with the offending index
        let mut bad = doc.clone();
        bad.full.as_mut().unwrap()[0][1][2] += 1e-3;
        match bad.to_tensor(Format::Auto) {
            Err(ParseError::Symmetry { i: 1, j: 2, k: 3, .. }) => {}
            other => panic!("expected symmetry error, got {other:?}"),
        }
    }

    #[test]
    fn zero_compact_parses_to_zero() {
        let doc: TensorDocument = serde_json::from_str(
            r#"{"compact": [[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0]]}"#,
        )
        .unwrap();
        assert_eq!(doc.to_tensor(Format::Auto).unwrap(), PiezoTensor::ZERO);
    }

    #[test]
    fn compact_index_map() {
        // row (P111..P112) = (1,0,0,0,0,0): only P111 = 1 in the full array
        let doc: TensorDocument = serde_json::from_str(
            r#"{"compact": [[1,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0]]}"#,
        )
        .unwrap();
        let p = doc.to_tensor(Format::Compact).unwrap();
        let t = p.to_tensor3();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let expect = if (i, j, k) == (0, 0, 0) { 1.0 } else { 0.0 };
                    assert_eq!(t.0[i][j][k], expect);
                }
            }
        }
    }

    #[test]
    fn format_mismatch_errors() {
        let doc: TensorDocument =
            serde_json::from_str(r#"{"compact": [[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0]]}"#).unwrap();
        assert!(doc.to_tensor(Format::Full).is_err());
        let empty: TensorDocument = serde_json::from_str("{}").unwrap();
        assert!(empty.to_tensor(Format::Auto).is_err());
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let mut rng = sample::rng(102);
        let p1 = sample::piezo(&mut rng);
        let p2 = sample::piezo(&mut rng);
        let text = format!("# comment\n{}\n\n{}\n", csv_line(&p1), csv_line(&p2));
        let parsed = parse_csv_batch(&text).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0].1, p1);
        assert_eq!(parsed[1].1, p2);
        assert_eq!(parsed[0].0, "row1");

        match parse_csv_batch("1,2,3\n") {
            Err(ParseError::RowLength { row: 1, expected: 18, found: 3 }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let mut cells = vec!["0"; 18];
        cells[4] = "abc";
        match parse_csv_batch(&cells.join(",")) {
            Err(ParseError::Number { row: 1, col: 5, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn report_id_validation() {
        let mut rng = sample::rng(103);
        let p = sample::piezo(&mut rng);
        let vals = crate::invariants::evaluate_basis(&p);
        let report = ReportDocument {
            tensors: vec![TensorReport {
                name: "t".into(),
                invariants: Some(invariant_entries(&vals)),
                ..TensorReport::default()
            }],
        };
        assert!(report.validate_ids().is_ok());
        let mut bad = report;
        bad.tensors[0].invariants.as_mut().unwrap()[0].id = "nope".into();
        assert!(bad.validate_ids().is_err());
    }
}
