//! CSV form of solution sets: a header row, then one row per entry with
//! the policy id followed by one column per objective. Metadata columns
//! (`policy_id`, `iteration`, `policy_index`, `config_hash`) are
//! recognised on input; every other column is an objective.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::sets::SolutionSet;
use crate::value::ValueVector;

pub const METADATA_COLUMNS: [&str; 4] = ["policy_id", "iteration", "policy_index", "config_hash"];

/// Objective column names for the water reservoir.
pub const RESERVOIR_OBJECTIVES: [&str; 2] = ["flooding", "water-demand"];

/// Default objective names `v0 … v(d−1)`.
pub fn default_objective_names(dim: usize) -> Vec<String> {
    (0..dim).map(|i| format!("v{i}")).collect()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Writes `set` with the given objective names. When `config_hash` is
/// set, it is appended to every row in a `config_hash` column.
pub fn write_solution_csv<W: Write>(
    out: W,
    set: &SolutionSet,
    objectives: &[String],
    config_hash: Option<&str>,
) -> Result<()> {
    if let Some(d) = set.dim() {
        if d != objectives.len() {
            return Err(Error::DimensionMismatch { expected: objectives.len(), found: d });
        }
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let mut header = vec!["policy_id".to_string()];
    header.extend(objectives.iter().cloned());
    if config_hash.is_some() {
        header.push("config_hash".into());
    }
    w.write_record(&header).map_err(csv_err)?;
    for e in set.entries() {
        let mut row = vec![e.policy_id.to_string()];
        row.extend(e.value.iter().map(|x| x.to_string()));
        if let Some(h) = config_hash {
            row.push(h.to_string());
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))
}

/// A parsed CSV table: header and string cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn read<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let header: Vec<String> = r.headers().map_err(csv_err)?.iter().map(str::to_owned).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|r| r.iter().map(str::to_owned).collect()).map_err(csv_err))
            .collect::<Result<Vec<Vec<String>>>>()?;
        Ok(Self { header, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Columns that are not metadata.
    pub fn objective_columns(&self) -> Vec<usize> {
        (0..self.header.len())
            .filter(|&i| !METADATA_COLUMNS.contains(&self.header[i].as_str()))
            .collect()
    }

    pub fn numeric(&self, row: usize, col: usize) -> Result<f64> {
        let cell = &self.rows[row][col];
        cell.parse()
            .map_err(|_| Error::Parse(format!("row {}: '{}' in column '{}' is not a number", row + 1, cell, self.header[col])))
    }

    /// Interprets the table as a solution set.
    pub fn to_solution_set(&self) -> Result<SolutionSet> {
        let objectives = self.objective_columns();
        let id_col = self.column("policy_id");
        let mut set = SolutionSet::new();
        for r in 0..self.rows.len() {
            let values = objectives.iter().map(|&c| self.numeric(r, c)).collect::<Result<Vec<f64>>>()?;
            let id = match id_col {
                Some(c) => self.rows[r][c]
                    .parse()
                    .map_err(|_| Error::Parse(format!("row {}: bad policy_id", r + 1)))?,
                None => r as u64,
            };
            set.push(id, ValueVector::new(values)?)?;
        }
        Ok(set)
    }

    pub fn objective_names(&self) -> Vec<String> {
        self.objective_columns().into_iter().map(|c| self.header[c].clone()).collect()
    }
}

/// Reads a solution set and its objective names.
pub fn read_solution_csv<R: Read>(input: R) -> Result<(SolutionSet, Vec<String>)> {
    let table = Table::read(input)?;
    Ok((table.to_solution_set()?, table.objective_names()))
}
