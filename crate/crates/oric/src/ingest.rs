//! CSV batches to encoded [`LabeledBatch`]es.

use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use oric_core::pattern::NumericColumn;
use oric_core::LabeledBatch;

use serde::{Deserialize, Serialize};

use crate::encoder::EncoderState;
use crate::error::{DataError, Result};

/// Which columns play which role.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvLayout {
    pub label_column: String,
    /// Columns parsed as numbers and carried along without being mined.
    pub numeric_columns: Vec<String>,
}

impl CsvLayout {
    pub fn new(label_column: impl Into<String>) -> Self {
        CsvLayout {
            label_column: label_column.into(),
            numeric_columns: Vec::new(),
        }
    }
}

/// Column layout and encoder, kept in a sidecar file next to the model so
/// later batches are encoded the same way.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestState {
    pub layout: CsvLayout,
    pub encoder: EncoderState,
}

impl IngestState {
    /// `model.oric` → `model.oric.encoder.json`
    pub fn sidecar_path(model_path: &Path) -> PathBuf {
        let mut name = model_path.as_os_str().to_owned();
        name.push(".encoder.json");
        PathBuf::from(name)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| DataError::io(path, e))?;
        serde_json::from_slice(&bytes)
            .map_err(|e| DataError::CorruptFile(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self).expect("ingest state serializes");
        std::fs::write(path, json + "\n").map_err(|e| DataError::io(path, e))
    }
}

pub fn ingest_csv(
    path: &Path,
    layout: &CsvLayout,
    encoder: &EncoderState,
    period: u64,
) -> Result<(LabeledBatch, EncoderState)> {
    let file = File::open(path).map_err(|e| DataError::io(path, e))?;
    ingest_reader(file, layout, encoder, period)
}

struct ColumnRoles {
    label: usize,
    numeric: Vec<usize>,
    categorical: Vec<usize>,
}

impl ColumnRoles {
    fn resolve(header: &[String], layout: &CsvLayout) -> Result<Self> {
        let label = header
            .iter()
            .position(|h| *h == layout.label_column)
            .ok_or_else(|| DataError::MissingLabelColumn(layout.label_column.clone()))?;
        let numeric: Vec<usize> = layout
            .numeric_columns
            .iter()
            .map(|name| {
                header.iter().position(|h| h == name).ok_or_else(|| {
                    DataError::SchemaMismatch(format!("numeric column `{name}` not in header"))
                })
            })
            .collect::<Result<_>>()?;
        let categorical = (0..header.len())
            .filter(|i| *i != label && !numeric.contains(i))
            .collect();
        Ok(ColumnRoles {
            label,
            numeric,
            categorical,
        })
    }
}

/// Categorical column names of a CSV file, read from its header only.
pub fn read_schema(path: &Path, layout: &CsvLayout) -> Result<Vec<String>> {
    let file = File::open(path).map_err(|e| DataError::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(file);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_owned()).collect();
    let roles = ColumnRoles::resolve(&header, layout)?;
    Ok(roles
        .categorical
        .iter()
        .map(|&i| header[i].clone())
        .collect())
}

/// Reads one batch. Every column other than the label and the numeric ones is
/// categorical. The returned encoder has absorbed this batch's categories.
pub fn ingest_reader<R: Read>(
    reader: R,
    layout: &CsvLayout,
    encoder: &EncoderState,
    period: u64,
) -> Result<(LabeledBatch, EncoderState)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_owned()).collect();
    let roles = ColumnRoles::resolve(&header, layout)?;
    let (label_idx, numeric_idx, cat_idx) = (roles.label, roles.numeric, roles.categorical);
    let names: Vec<String> = cat_idx.iter().map(|&i| header[i].clone()).collect();

    let mut encoder = encoder.clone();
    encoder.bind(&names)?;

    let mut raw: Vec<Vec<String>> = vec![Vec::new(); cat_idx.len()];
    let mut numeric: Vec<Vec<f64>> = vec![Vec::new(); numeric_idx.len()];
    let mut labels = Vec::new();
    for (n, record) in rdr.records().enumerate() {
        // Row numbers are 1-based data rows (the header is row 0).
        let row = n + 1;
        let record = record.map_err(|e| DataError::MalformedRow {
            row,
            reason: e.to_string(),
        })?;
        let value = record[label_idx].trim();
        labels.push(match value {
            "0" => 0u8,
            "1" => 1u8,
            other => {
                return Err(DataError::NonBinaryLabel {
                    row,
                    value: other.to_owned(),
                })
            }
        });
        for (col, &i) in numeric.iter_mut().zip(&numeric_idx) {
            let cell = record[i].trim();
            col.push(cell.parse().map_err(|_| DataError::MalformedRow {
                row,
                reason: format!("`{cell}` in numeric column `{}` is not a number", header[i]),
            })?);
        }
        for (f, &i) in cat_idx.iter().enumerate() {
            let cell = record[i].trim();
            encoder.observe(f, cell);
            raw[f].push(cell.to_owned());
        }
    }

    let columns: Vec<Vec<u32>> = raw
        .iter()
        .enumerate()
        .map(|(f, cells)| cells.iter().map(|c| encoder.encode(f, c)).collect())
        .collect();
    let numeric = layout
        .numeric_columns
        .iter()
        .cloned()
        .zip(numeric)
        .map(|(name, values)| NumericColumn { name, values })
        .collect();
    let batch = LabeledBatch::new(names, columns, labels, period)?.with_numeric(numeric)?;
    Ok((batch, encoder))
}

/// Writes a batch with its raw category codes, label column last.
pub fn write_batch_csv<W: Write>(batch: &LabeledBatch, label_column: &str, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = batch.schema().iter().map(String::as_str).collect();
    header.push(label_column);
    wtr.write_record(&header)?;
    let mut record: Vec<String> = Vec::with_capacity(header.len());
    for row in 0..batch.num_rows() {
        record.clear();
        record.extend((0..batch.num_features()).map(|f| batch.value(f, row).to_string()));
        record.push(batch.labels()[row].to_string());
        wtr.write_record(&record)?;
    }
    wtr.flush().map_err(|e| DataError::io("<output>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "site,app,hour,click\nx,p,1.5,1\ny,p,2,0\nx,q,3,1\n";

    fn layout() -> CsvLayout {
        CsvLayout {
            label_column: "click".into(),
            numeric_columns: vec!["hour".into()],
        }
    }

    #[test]
    fn encodes_small_file() {
        let (batch, enc) =
            ingest_reader(SMALL.as_bytes(), &layout(), &EncoderState::default(), 1).unwrap();
        assert_eq!(batch.num_rows(), 3);
        assert_eq!(batch.schema(), &["site".to_string(), "app".to_string()]);
        assert_eq!(batch.columns()[0], vec![1, 2, 1]);
        assert_eq!(batch.columns()[1], vec![1, 1, 2]);
        assert_eq!(batch.labels(), &[1, 0, 1]);
        assert_eq!(batch.numeric()[0].values, vec![1.5, 2.0, 3.0]);

        let (again, enc2) = ingest_reader(SMALL.as_bytes(), &layout(), &enc, 1).unwrap();
        assert_eq!(again, batch);
        assert_eq!(enc2.encode(0, "y"), enc.encode(0, "y"));
    }

    #[test]
    fn rare_category_gets_others_code() {
        let mut csv = String::from("a,label\n");
        for _ in 0..5 {
            csv.push_str("common,1\n");
        }
        csv.push_str("rare,0\n");
        let (batch, _) = ingest_reader(
            csv.as_bytes(),
            &CsvLayout::new("label"),
            &EncoderState::new(5),
            1,
        )
        .unwrap();
        assert_eq!(batch.columns()[0], vec![1, 1, 1, 1, 1, 0]);
    }

    #[test]
    fn codes_are_append_only() {
        let l = CsvLayout::new("y");
        let (_, enc) = ingest_reader(
            "a,y\nu,1\nv,0\n".as_bytes(),
            &l,
            &EncoderState::default(),
            1,
        )
        .unwrap();
        let (b2, _) = ingest_reader("a,y\nw,1\nv,0\nu,1\n".as_bytes(), &l, &enc, 2).unwrap();
        assert_eq!(b2.columns()[0], vec![3, 2, 1]);
    }

    #[test]
    fn errors() {
        let l = CsvLayout::new("click");
        let enc = EncoderState::default();
        assert!(matches!(
            ingest_reader("a,b\n1,2\n".as_bytes(), &l, &enc, 1),
            Err(DataError::MissingLabelColumn(_))
        ));
        assert!(matches!(
            ingest_reader("a,click\nx,1\ny,2\n".as_bytes(), &l, &enc, 1),
            Err(DataError::NonBinaryLabel { row: 2, .. })
        ));
        assert!(matches!(
            ingest_reader("a,click\nx,1\ny\n".as_bytes(), &l, &enc, 1),
            Err(DataError::MalformedRow { row: 2, .. })
        ));
        let (_, bound) = ingest_reader("a,click\nx,1\n".as_bytes(), &l, &enc, 1).unwrap();
        assert!(matches!(
            ingest_reader("b,click\nx,1\n".as_bytes(), &l, &bound, 2),
            Err(DataError::SchemaMismatch(_))
        ));
    }

    #[test]
    fn written_batch_reads_back() {
        let batch = LabeledBatch::new(
            vec!["a".into(), "b".into()],
            vec![vec![1, 2, 1], vec![3, 3, 4]],
            vec![0, 1, 1],
            1,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_batch_csv(&batch, "y", &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "a,b,y\n1,3,0\n2,3,1\n1,4,1\n"
        );
        let (back, _) =
            ingest_reader(&buf[..], &CsvLayout::new("y"), &EncoderState::default(), 1).unwrap();
        assert_eq!(back.labels(), batch.labels());
        assert_eq!(back.num_rows(), 3);
    }
}
