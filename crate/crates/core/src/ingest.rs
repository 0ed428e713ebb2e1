//! Survey CSV + schema → validated [`ResponseMatrix`].
//!
//! Codes are 0-based consecutive integers per item: an item with scale size
//! `k` accepts `0..=k-1`. The schema, not the data, declares `k`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sentinel stored in [`ResponseMatrix`] code storage for a missing response.
pub const MISSING_CODE: u8 = u8::MAX;

/// Largest supported scale size (codes must stay below [`MISSING_CODE`]).
pub const MAX_SCALE: u32 = MISSING_CODE as u32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub id: String,
    #[serde(alias = "scale_size")]
    pub scale: u32,
}

impl Item {
    pub fn new(id: impl Into<String>, scale: u32) -> Self {
        Item {
            id: id.into(),
            scale,
        }
    }
}

/// Column layout and scale sizes of a survey file.
///
/// Stored on disk as JSON:
///
/// ```json
/// {
///   "id_column": "respondent",
///   "attribute_columns": ["party"],
///   "missing_token": "NA",
///   "items": [ { "id": "trust_science", "scale": 4 }, { "id": "vaccines_safe", "scale": 5 } ]
/// }
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveySchema {
    pub items: Vec<Item>,
    pub id_column: String,
    #[serde(default)]
    pub attribute_columns: Vec<String>,
    #[serde(default)]
    pub missing_token: String,
}

impl SurveySchema {
    pub fn new(id_column: impl Into<String>, items: Vec<Item>) -> Self {
        SurveySchema {
            items,
            id_column: id_column.into(),
            attribute_columns: Vec::new(),
            missing_token: String::new(),
        }
    }

    pub fn with_attributes(mut self, columns: impl IntoIterator<Item = impl Into<String>>) -> Self {
        self.attribute_columns = columns.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_missing_token(mut self, token: impl Into<String>) -> Self {
        self.missing_token = token.into();
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let schema: SurveySchema =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schema serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.items.is_empty() {
            return Err(Error::Schema("schema lists no items".into()));
        }
        if self.id_column.is_empty() {
            return Err(Error::Schema("id_column is empty".into()));
        }
        let mut seen: HashSet<&str> = HashSet::new();
        seen.insert(&self.id_column);
        for col in &self.attribute_columns {
            if col.is_empty() {
                return Err(Error::Schema("empty attribute column name".into()));
            }
            if !seen.insert(col) {
                return Err(Error::Schema(format!("column `{col}` is listed twice")));
            }
        }
        for item in &self.items {
            if item.id.is_empty() {
                return Err(Error::Schema("empty item id".into()));
            }
            if !(2..=MAX_SCALE).contains(&item.scale) {
                return Err(Error::Schema(format!(
                    "item `{}` has scale size {}, expected 2..={MAX_SCALE}",
                    item.id, item.scale
                )));
            }
            if !seen.insert(&item.id) {
                return Err(Error::Schema(format!("column `{}` is listed twice", item.id)));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingPolicy {
    /// Complete-case analysis: rows with any missing item are discarded.
    #[default]
    DropParticipant,
    /// Keep rows; pairwise weights only use items both participants answered.
    KeepPairwise,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    pub rows_read: usize,
    pub rows_dropped: usize,
    /// Missing cells among the retained rows.
    pub missing_cells: usize,
    pub policy: MissingPolicy,
}

/// Participants × items ordinal codes with missing markers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResponseMatrix {
    participants: Vec<String>,
    items: Vec<Item>,
    /// Row-major, `MISSING_CODE` marks a missing response.
    codes: Vec<u8>,
    attribute_columns: Vec<String>,
    attributes: Vec<BTreeMap<String, String>>,
}

impl ResponseMatrix {
    /// Builds and validates a matrix. `rows[p][i]` is `None` for a missing response.
    pub fn new(
        participants: Vec<String>,
        items: Vec<Item>,
        rows: &[Vec<Option<u32>>],
        attribute_columns: Vec<String>,
        attributes: Vec<BTreeMap<String, String>>,
    ) -> Result<Self> {
        if participants.is_empty() {
            return Err(Error::EmptySurvey(String::new()));
        }
        if items.is_empty() {
            return Err(Error::TooFewItems {
                required: 1,
                got: 0,
            });
        }
        if rows.len() != participants.len() || attributes.len() != participants.len() {
            return Err(Error::InvalidArgument(
                "participants, rows and attributes differ in length".into(),
            ));
        }
        let mut first_row: HashMap<&str, usize> = HashMap::new();
        for (row, id) in participants.iter().enumerate() {
            if let Some(first) = first_row.insert(id, row) {
                return Err(Error::DuplicateParticipant {
                    id: id.clone(),
                    first: first + 1,
                    second: row + 1,
                });
            }
        }
        for item in &items {
            if !(2..=MAX_SCALE).contains(&item.scale) {
                return Err(Error::Schema(format!("item `{}` has scale {}", item.id, item.scale)));
            }
        }
        let m = items.len();
        let mut codes = Vec::with_capacity(rows.len() * m);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidArgument(format!(
                    "row {} has {} codes, expected {m}",
                    r + 1,
                    row.len()
                )));
            }
            for (item, code) in items.iter().zip(row) {
                match *code {
                    None => codes.push(MISSING_CODE),
                    Some(c) if c < item.scale => codes.push(c as u8),
                    Some(c) => {
                        return Err(Error::OutOfRange {
                            row: r + 1,
                            column: item.id.clone(),
                            value: c.to_string(),
                            max: item.scale - 1,
                        })
                    }
                }
            }
        }
        Ok(ResponseMatrix {
            participants,
            items,
            codes,
            attribute_columns,
            attributes,
        })
    }

    /// Convenience constructor with generated ids `p0, p1, …` and `q0, q1, …`.
    pub fn from_codes(scales: &[u32], rows: &[Vec<Option<u32>>]) -> Result<Self> {
        let items = scales
            .iter()
            .enumerate()
            .map(|(i, &k)| Item::new(format!("q{i}"), k))
            .collect();
        let participants = (0..rows.len()).map(|p| format!("p{p}")).collect();
        Self::new(
            participants,
            items,
            rows,
            Vec::new(),
            vec![BTreeMap::new(); rows.len()],
        )
    }

    /// Like [`from_codes`](Self::from_codes) for complete data.
    pub fn from_complete(scales: &[u32], rows: &[Vec<u32>]) -> Result<Self> {
        let rows: Vec<Vec<Option<u32>>> = rows
            .iter()
            .map(|r| r.iter().copied().map(Some).collect())
            .collect();
        Self::from_codes(scales, &rows)
    }

    pub fn n_participants(&self) -> usize {
        self.participants.len()
    }

    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    pub fn participants(&self) -> &[String] {
        &self.participants
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn attribute_columns(&self) -> &[String] {
        &self.attribute_columns
    }

    pub fn attributes(&self, participant: usize) -> &BTreeMap<String, String> {
        &self.attributes[participant]
    }

    pub fn code(&self, participant: usize, item: usize) -> Option<u32> {
        match self.codes[participant * self.items.len() + item] {
            MISSING_CODE => None,
            c => Some(c as u32),
        }
    }

    /// Raw row with [`MISSING_CODE`] markers.
    pub fn raw_row(&self, participant: usize) -> &[u8] {
        let m = self.items.len();
        &self.codes[participant * m..(participant + 1) * m]
    }

    pub fn missing_cells(&self) -> usize {
        self.codes.iter().filter(|&&c| c == MISSING_CODE).count()
    }

    pub fn has_missing(&self) -> bool {
        self.codes.contains(&MISSING_CODE)
    }

    /// Scale sizes and how many items use each, ascending by size.
    pub fn scale_counts(&self) -> BTreeMap<u32, usize> {
        let mut counts = BTreeMap::new();
        for item in &self.items {
            *counts.entry(item.scale).or_insert(0) += 1;
        }
        counts
    }

    /// `"10×4pt, 3×5pt"`.
    pub fn scale_summary(&self) -> String {
        self.scale_counts()
            .iter()
            .map(|(k, n)| format!("{n}×{k}pt"))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// The same participants in a different order.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let m = self.items.len();
        let mut codes = Vec::with_capacity(self.codes.len());
        for &p in order {
            codes.extend_from_slice(&self.codes[p * m..(p + 1) * m]);
        }
        ResponseMatrix {
            participants: order.iter().map(|&p| self.participants[p].clone()).collect(),
            items: self.items.clone(),
            codes,
            attribute_columns: self.attribute_columns.clone(),
            attributes: order.iter().map(|&p| self.attributes[p].clone()).collect(),
        }
    }

    /// Writes the matrix in the layout described by `schema`
    /// (id column, attribute columns, then items).
    pub fn write_csv<W: Write>(&self, schema: &SurveySchema, writer: W) -> Result<()> {
        if schema.items != self.items {
            return Err(Error::Schema("schema items do not match the matrix".into()));
        }
        let mut out = csv::Writer::from_writer(writer);
        let mut header = vec![schema.id_column.as_str()];
        header.extend(schema.attribute_columns.iter().map(String::as_str));
        header.extend(self.items.iter().map(|i| i.id.as_str()));
        out.write_record(&header).map_err(csv_err)?;
        let mut record: Vec<String> = Vec::with_capacity(header.len());
        for p in 0..self.n_participants() {
            record.clear();
            record.push(self.participants[p].clone());
            for col in &schema.attribute_columns {
                record.push(self.attributes[p].get(col).cloned().unwrap_or_default());
            }
            for i in 0..self.n_items() {
                record.push(match self.code(p, i) {
                    Some(c) => c.to_string(),
                    None => schema.missing_token.clone(),
                });
            }
            out.write_record(&record).map_err(csv_err)?;
        }
        out.flush().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(())
    }

    pub fn write_csv_path(&self, schema: &SurveySchema, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(schema, std::io::BufWriter::new(file))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Csv(e.to_string())
}

/// Loads and validates a survey file.
pub fn load_survey(
    csv_path: impl AsRef<Path>,
    schema: &SurveySchema,
    missing_policy: MissingPolicy,
) -> Result<(ResponseMatrix, LoadReport)> {
    let path = csv_path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_survey(std::io::BufReader::new(file), schema, missing_policy)
}

pub fn read_survey<R: Read>(
    reader: R,
    schema: &SurveySchema,
    missing_policy: MissingPolicy,
) -> Result<(ResponseMatrix, LoadReport)> {
    schema.validate()?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);
    let header = rdr.headers().map_err(csv_err)?.clone();
    let column = |name: &str| -> Result<usize> {
        let mut hits = header.iter().enumerate().filter(|(_, h)| h.trim() == name);
        let (idx, _) = hits
            .next()
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))?;
        if hits.next().is_some() {
            return Err(Error::Csv(format!("header names column `{name}` twice")));
        }
        Ok(idx)
    };
    let id_idx = column(&schema.id_column)?;
    let attr_idx: Vec<usize> = schema
        .attribute_columns
        .iter()
        .map(|c| column(c))
        .collect::<Result<_>>()?;
    let item_idx: Vec<usize> = schema
        .items
        .iter()
        .map(|i| column(&i.id))
        .collect::<Result<_>>()?;
    let missing_token = schema.missing_token.trim();

    let mut participants = Vec::new();
    let mut rows: Vec<Vec<Option<u32>>> = Vec::new();
    let mut attributes = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut report = LoadReport {
        policy: missing_policy,
        ..LoadReport::default()
    };

    let mut record = csv::StringRecord::new();
    while rdr.read_record(&mut record).map_err(csv_err)? {
        report.rows_read += 1;
        let line = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(report.rows_read + 1);
        let id = record[id_idx].to_string();
        if let Some(first) = seen.insert(id.clone(), line) {
            return Err(Error::DuplicateParticipant {
                id,
                first,
                second: line,
            });
        }
        let mut row = Vec::with_capacity(item_idx.len());
        for (item, &col) in schema.items.iter().zip(&item_idx) {
            let cell = record[col].trim();
            if cell == missing_token {
                row.push(None);
                continue;
            }
            match cell.parse::<u32>() {
                Ok(c) if c < item.scale => row.push(Some(c)),
                _ => {
                    return Err(Error::OutOfRange {
                        row: line,
                        column: item.id.clone(),
                        value: cell.to_string(),
                        max: item.scale - 1,
                    })
                }
            }
        }
        let missing = row.iter().filter(|c| c.is_none()).count();
        if missing > 0 && missing_policy == MissingPolicy::DropParticipant {
            report.rows_dropped += 1;
            continue;
        }
        report.missing_cells += missing;
        participants.push(id);
        rows.push(row);
        attributes.push(
            schema
                .attribute_columns
                .iter()
                .zip(&attr_idx)
                .map(|(name, &col)| (name.clone(), record[col].to_string()))
                .collect::<BTreeMap<_, _>>(),
        );
    }

    if participants.is_empty() {
        let detail = if report.rows_dropped > 0 {
            format!(" after dropping {} incomplete rows", report.rows_dropped)
        } else {
            String::new()
        };
        return Err(Error::EmptySurvey(detail));
    }
    let matrix = ResponseMatrix::new(
        participants,
        schema.items.clone(),
        &rows,
        schema.attribute_columns.clone(),
        attributes,
    )?;
    Ok((matrix, report))
}
