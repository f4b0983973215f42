use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::{LatticeError, Range, ScalarField, Section, SpacetimeGrid};

/// JSON form of a section or scalar field. `values` has one row per time
/// level, each row holding `nx·r` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub grid: SpacetimeGrid,
    pub role: String,
    pub values: Vec<Vec<f64>>,
}

fn rows(values: &[f64], nt: usize) -> Vec<Vec<f64>> {
    let m = values.len() / nt;
    values.chunks(m).map(<[f64]>::to_vec).collect()
}

fn flatten(rows: &[Vec<f64>], nt: usize, width: usize) -> Result<Vec<f64>, LatticeError> {
    if rows.len() != nt {
        return Err(LatticeError::ShapeMismatch { expected: nt, found: rows.len() });
    }
    if let Some(r) = rows.iter().find(|r| r.len() != width) {
        return Err(LatticeError::ShapeMismatch { expected: width, found: r.len() });
    }
    Ok(rows.concat())
}

impl Envelope {
    pub fn from_section(s: &Section, role: &str) -> Self {
        let g = *s.grid();
        Self { grid: g, role: role.to_owned(), values: rows(s.values(), g.nt) }
    }

    pub fn from_scalar(f: &ScalarField, role: &str) -> Self {
        let g = f.grid().with_rank(1).expect("rank 1 is valid");
        Self { grid: g, role: role.to_owned(), values: rows(f.values(), g.nt) }
    }

    pub fn to_section(&self) -> Result<Section, LatticeError> {
        let g = self.grid_checked()?;
        Section::from_values(&g, flatten(&self.values, g.nt, g.nx * g.rank)?)
    }

    pub fn to_scalar(&self, range: Range) -> Result<ScalarField, LatticeError> {
        let g = self.grid_checked()?;
        ScalarField::new(&g, flatten(&self.values, g.nt, g.nx)?, range)
    }

    fn grid_checked(&self) -> Result<SpacetimeGrid, LatticeError> {
        let g = &self.grid;
        SpacetimeGrid::new(g.nt, g.nx, g.t_min, g.t_max, g.length, g.rank)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("envelope serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, LatticeError> {
        serde_json::from_str(s).map_err(|e| LatticeError::Malformed(e.to_string()))
    }
}

/// Writes one CSV row per time level.
pub fn write_csv<W: Write>(values: &[f64], nt: usize, out: W) -> Result<(), LatticeError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for row in rows(values, nt) {
        w.serialize(row).map_err(|e| LatticeError::Malformed(e.to_string()))?;
    }
    w.flush().map_err(|e| LatticeError::Malformed(e.to_string()))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<Vec<f64>>, LatticeError> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(input);
    r.deserialize()
        .map(|row| row.map_err(|e: csv::Error| LatticeError::Malformed(e.to_string())))
        .collect()
}

impl Section {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), LatticeError> {
        write_csv(self.values(), self.grid().nt, out)
    }

    pub fn read_csv<R: Read>(grid: &SpacetimeGrid, input: R) -> Result<Self, LatticeError> {
        let rows = read_csv(input)?;
        Section::from_values(grid, flatten(&rows, grid.nt, grid.nx * grid.rank)?)
    }
}

impl ScalarField {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), LatticeError> {
        write_csv(self.values(), self.grid().nt, out)
    }

    pub fn read_csv<R: Read>(grid: &SpacetimeGrid, range: Range, input: R) -> Result<Self, LatticeError> {
        let rows = read_csv(input)?;
        ScalarField::new(grid, flatten(&rows, grid.nt, grid.nx)?, range)
    }
}
