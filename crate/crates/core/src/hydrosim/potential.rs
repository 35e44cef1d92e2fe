//! Sampled external potentials `V(z)` read from two-column text tables.

use crate::error::{Error, Result};

/// Piecewise-linear potential through `(position, value)` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialTable {
    nodes: Vec<(f64, f64)>,
}

impl PotentialTable {
    pub fn new(nodes: Vec<(f64, f64)>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::domain("potential", "table has no rows"));
        }
        if nodes.iter().any(|(z, v)| !z.is_finite() || !v.is_finite()) {
            return Err(Error::domain("potential", "non-finite entry"));
        }
        if nodes.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::domain(
                "potential",
                "positions must be strictly increasing",
            ));
        }
        Ok(Self { nodes })
    }

    /// Whitespace-separated `position value` rows; blank lines and `#`
    /// comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut nodes = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 2 {
                return Err(Error::domain(
                    "potential",
                    format!(
                        "line {}: expected 2 columns, found {}",
                        lineno + 1,
                        cols.len()
                    ),
                ));
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| {
                    Error::domain(
                        "potential",
                        format!("line {}: bad number {s:?}", lineno + 1),
                    )
                })
            };
            nodes.push((parse(cols[0])?, parse(cols[1])?));
        }
        Self::new(nodes)
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    /// Linear interpolation, held constant outside the tabulated range.
    pub fn eval(&self, z: f64) -> f64 {
        let nodes = &self.nodes;
        let first = nodes[0];
        let last = nodes[nodes.len() - 1];
        if z <= first.0 {
            return first.1;
        }
        if z >= last.0 {
            return last.1;
        }
        let i = nodes.partition_point(|(zi, _)| *zi <= z);
        let (z0, v0) = nodes[i - 1];
        let (z1, v1) = nodes[i];
        v0 + (v1 - v0) * (z - z0) / (z1 - z0)
    }

    /// Values on the simulation grid `z_j = j L / points`.
    pub fn sample(&self, grid_length: f64, points: usize) -> Vec<f64> {
        let dz = grid_length / points as f64;
        (0..points).map(|j| self.eval(j as f64 * dz)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_interpolates() {
        let t = PotentialTable::parse("# z V\n0 0\n1.0  2.0\n\n3 2 # flat\n").unwrap();
        assert_eq!(t.nodes().len(), 3);
        assert_eq!(t.eval(0.5), 1.0);
        assert_eq!(t.eval(2.0), 2.0);
        assert_eq!(t.eval(-1.0), 0.0);
        assert_eq!(t.eval(10.0), 2.0);
        assert_eq!(t.sample(4.0, 4), vec![0.0, 2.0, 2.0, 2.0]);
    }

    #[test]
    fn rejects_malformed_tables() {
        assert!(PotentialTable::parse("").is_err());
        assert!(PotentialTable::parse("0 1 2").is_err());
        assert!(PotentialTable::parse("0 x").is_err());
        assert!(PotentialTable::parse("1 0\n0 0").is_err());
        assert!(PotentialTable::parse("0 inf").is_err());
    }
}
