//! Tabular datasets and CSV ingestion.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Numeric instances with labels densely encoded as `0..num_labels`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    instances: Vec<Vec<f64>>,
    labels: Vec<usize>,
    label_names: Vec<String>,
    feature_names: Vec<String>,
    label_column: String,
}

impl Dataset {
    pub fn new(
        instances: Vec<Vec<f64>>,
        labels: Vec<usize>,
        label_names: Vec<String>,
    ) -> Result<Self> {
        let dim = instances.first().map_or(0, Vec::len);
        let feature_names = (0..dim).map(|j| format!("x{j}")).collect();
        Self::with_names(instances, labels, label_names, feature_names, "label".into())
    }

    pub fn with_names(
        instances: Vec<Vec<f64>>,
        labels: Vec<usize>,
        label_names: Vec<String>,
        feature_names: Vec<String>,
        label_column: String,
    ) -> Result<Self> {
        if instances.is_empty() {
            return Err(Error::InvalidInput("dataset has no rows".into()));
        }
        if instances.len() != labels.len() {
            return Err(Error::InvalidInput(format!(
                "{} instances but {} labels",
                instances.len(),
                labels.len()
            )));
        }
        let dim = feature_names.len();
        if dim == 0 {
            return Err(Error::InvalidInput("dataset has no feature columns".into()));
        }
        if let Some(i) = instances.iter().position(|x| x.len() != dim) {
            return Err(Error::InvalidInput(format!(
                "row {} has {} features, expected {dim}",
                i + 1,
                instances[i].len()
            )));
        }
        if let Some(&y) = labels.iter().find(|&&y| y >= label_names.len()) {
            return Err(Error::InvalidInput(format!(
                "label {y} out of range for {} label names",
                label_names.len()
            )));
        }
        if instances.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite feature value".into()));
        }
        Ok(Dataset {
            instances,
            labels,
            label_names,
            feature_names,
            label_column,
        })
    }

    /// Encodes raw label strings by their sorted distinct values.
    pub fn from_raw_labels(
        instances: Vec<Vec<f64>>,
        raw_labels: &[String],
        feature_names: Vec<String>,
        label_column: String,
    ) -> Result<Self> {
        let label_names = sorted_distinct_labels(raw_labels);
        let labels = raw_labels
            .iter()
            .map(|l| label_names.iter().position(|n| n == l).expect("label is known"))
            .collect();
        Self::with_names(instances, labels, label_names, feature_names, label_column)
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.feature_names.len()
    }

    pub fn num_labels(&self) -> usize {
        self.label_names.len()
    }

    pub fn instances(&self) -> &[Vec<f64>] {
        &self.instances
    }

    pub fn instance(&self, i: usize) -> &[f64] {
        &self.instances[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn label_column(&self) -> &str {
        &self.label_column
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_labels()];
        for &y in &self.labels {
            counts[y] += 1;
        }
        counts
    }

    /// Rows at `indices`, keeping the full label vocabulary.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            instances: indices.iter().map(|&i| self.instances[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            label_names: self.label_names.clone(),
            feature_names: self.feature_names.clone(),
            label_column: self.label_column.clone(),
        }
    }

    /// Canonical CSV: header row, feature columns in order, label column last.
    pub fn write_csv<W: Write>(&self, writer: W, delimiter: u8) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .delimiter(delimiter)
            .from_writer(writer);
        let mut header = self.feature_names.clone();
        header.push(self.label_column.clone());
        w.write_record(&header)?;
        for (x, &y) in self.instances.iter().zip(&self.labels) {
            let mut rec: Vec<String> = x.iter().map(|v| v.to_string()).collect();
            rec.push(self.label_names[y].clone());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Distinct labels in numeric order when every label parses as a number,
/// lexicographic order otherwise.
fn sorted_distinct_labels(raw: &[String]) -> Vec<String> {
    let mut names: Vec<String> = raw.to_vec();
    let numeric: Option<Vec<f64>> = names.iter().map(|s| s.parse::<f64>().ok()).collect();
    if numeric.is_some() {
        names.sort_by(|a, b| {
            let (x, y) = (a.parse::<f64>().unwrap(), b.parse::<f64>().unwrap());
            x.total_cmp(&y).then_with(|| a.cmp(b))
        });
    } else {
        names.sort();
    }
    names.dedup();
    names
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    Index(usize),
}

impl Default for LabelColumn {
    fn default() -> Self {
        LabelColumn::Name(String::new())
    }
}

impl FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    /// Digits select a 0-based column index unless a header carries that
    /// exact name; resolution against the header happens at load time.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(LabelColumn::Name(s.to_string()))
    }
}

impl LabelColumn {
    fn resolve(&self, header: &[String]) -> Result<usize> {
        match self {
            LabelColumn::Index(i) if *i < header.len() => Ok(*i),
            LabelColumn::Index(i) => Err(Error::InvalidInput(format!(
                "label column index {i} out of range ({} columns)",
                header.len()
            ))),
            LabelColumn::Name(name) if name.is_empty() => Ok(header.len() - 1),
            LabelColumn::Name(name) => {
                if let Some(i) = header.iter().position(|h| h == name) {
                    Ok(i)
                } else if let Ok(i) = name.parse::<usize>() {
                    LabelColumn::Index(i).resolve(header)
                } else {
                    Err(Error::InvalidInput(format!("no column named {name:?}")))
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct CsvOptions {
    /// Label column; an empty name selects the last column.
    pub label_column: LabelColumn,
    pub delimiter: u8,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            label_column: LabelColumn::default(),
            delimiter: b',',
        }
    }
}

fn is_missing(cell: &str) -> bool {
    let c = cell.trim();
    c.is_empty() || c == "?" || c.eq_ignore_ascii_case("na") || c.eq_ignore_ascii_case("nan")
        || c.eq_ignore_ascii_case("null")
}

fn parse_cell(cell: &str, row: usize, column: &str) -> Result<f64> {
    if is_missing(cell) {
        return Err(Error::MissingValue {
            row,
            column: column.to_string(),
        });
    }
    match cell.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse {
            row,
            column: column.to_string(),
            message: format!("{cell:?} is not a finite number"),
        }),
    }
}

pub fn load_csv<P: AsRef<Path>>(path: P, options: &CsvOptions) -> Result<Dataset> {
    read_csv(File::open(path)?, options)
}

/// Reads a headed CSV. Reported row numbers count data rows from 1.
pub fn read_csv<R: Read>(reader: R, options: &CsvOptions) -> Result<Dataset> {
    let mut r = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(true)
        .from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if header.len() < 2 {
        return Err(Error::InvalidInput(
            "CSV needs a label column and at least one feature column".into(),
        ));
    }
    let label_idx = options.label_column.resolve(&header)?;
    let feature_names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != label_idx)
        .map(|(_, h)| h.clone())
        .collect();

    let mut instances = Vec::new();
    let mut raw_labels = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        if rec.len() != header.len() {
            return Err(Error::Parse {
                row,
                column: format!("{} fields", rec.len()),
                message: format!("expected {} fields", header.len()),
            });
        }
        let mut x = Vec::with_capacity(feature_names.len());
        for (j, cell) in rec.iter().enumerate() {
            if j == label_idx {
                if is_missing(cell) {
                    return Err(Error::MissingValue {
                        row,
                        column: header[j].clone(),
                    });
                }
                raw_labels.push(cell.trim().to_string());
            } else {
                x.push(parse_cell(cell, row, &header[j])?);
            }
        }
        instances.push(x);
    }
    let data = Dataset::from_raw_labels(
        instances,
        &raw_labels,
        feature_names,
        header[label_idx].clone(),
    )?;
    if data.num_labels() == 1 {
        log::warn!("dataset contains a single class");
    }
    Ok(data)
}

/// Reads unlabeled instances from a headed CSV, taking the named columns in
/// the given order, or every column when `columns` is empty.
pub fn read_instances<R: Read>(reader: R, delimiter: u8, columns: &[String]) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let picks: Vec<usize> = if columns.is_empty() {
        (0..header.len()).collect()
    } else {
        columns
            .iter()
            .map(|c| {
                header
                    .iter()
                    .position(|h| h == c)
                    .ok_or_else(|| Error::InvalidInput(format!("input has no column named {c:?}")))
            })
            .collect::<Result<_>>()?
    };
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        let x = picks
            .iter()
            .map(|&j| {
                let cell = rec.get(j).ok_or_else(|| Error::Parse {
                    row,
                    column: header[j].clone(),
                    message: "field missing".into(),
                })?;
                parse_cell(cell, row, &header[j])
            })
            .collect::<Result<Vec<f64>>>()?;
        out.push(x);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, label: &str) -> Result<Dataset> {
        read_csv(
            text.as_bytes(),
            &CsvOptions {
                label_column: label.parse().unwrap(),
                delimiter: b',',
            },
        )
    }

    #[test]
    fn encodes_labels_by_sorted_value() {
        let d = parse("f,y\n1,b\n2,a\n3,b\n", "y").unwrap();
        assert_eq!(d.label_names(), &["a", "b"]);
        assert_eq!(d.labels(), &[1, 0, 1]);
        assert_eq!(d.instances(), &[vec![1.0], vec![2.0], vec![3.0]]);
    }

    #[test]
    fn numeric_labels_sort_numerically() {
        let d = parse("f,y\n1,10\n2,2\n3,1\n", "y").unwrap();
        assert_eq!(d.label_names(), &["1", "2", "10"]);
    }

    #[test]
    fn label_column_by_index_and_default() {
        let d = parse("y,f,g\na,1,2\nb,3,4\n", "0").unwrap();
        assert_eq!(d.feature_names(), &["f", "g"]);
        assert_eq!(d.instance(1), &[3.0, 4.0]);
        let last = parse("f,y\n1,a\n", "").unwrap();
        assert_eq!(last.label_column(), "y");
    }

    #[test]
    fn non_numeric_cell_reports_position() {
        match parse("f,g,y\n1,2,a\n3,oops,b\n", "y") {
            Err(Error::Parse { row, column, .. }) => {
                assert_eq!(row, 2);
                assert_eq!(column, "g");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_cell_is_rejected() {
        assert!(matches!(
            parse("f,y\n?,a\n", "y"),
            Err(Error::MissingValue { row: 1, .. })
        ));
    }

    #[test]
    fn instances_by_column_name() {
        let text = "y,b,a\nq,1,2\nr,3,4\n";
        let x = read_instances(text.as_bytes(), b',', &["a".into(), "b".into()]).unwrap();
        assert_eq!(x, vec![vec![2.0, 1.0], vec![4.0, 3.0]]);
        assert!(read_instances(text.as_bytes(), b',', &["z".into()]).is_err());
    }

    #[test]
    fn canonical_csv_round_trips() {
        let d = parse("a,b,y\n0.1,-3e-7,x\n2.5,7,z\n1e300,0,x\n", "y").unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf, b',').unwrap();
        let back = parse(std::str::from_utf8(&buf).unwrap(), "y").unwrap();
        assert_eq!(back, d);
    }
}
