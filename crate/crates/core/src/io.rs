//! Line-oriented text formats for grids and sampled values.
//!
//! Every float is written with 17 significant digits, so a write/read round
//! trip reproduces the bit patterns and hence the grid checksum.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{angles_of, angles_to_cartesian, AmbientDim};
use crate::quadrature::{SampledFunction, SphereGrid, ValueKind};

pub const MANIFEST_MAGIC: &str = "# hyperfilt-grid v1";
pub const VALUES_MAGIC: &str = "# hyperfilt-values v1";

/// Fixed 17-significant-digit rendering.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn render_manifest(grid: &SphereGrid) -> Result<String> {
    let n = grid.dim().get();
    let mut s = String::new();
    let orders: Vec<String> = grid.orders().iter().map(|o| o.to_string()).collect();
    writeln!(s, "{MANIFEST_MAGIC}").unwrap();
    writeln!(s, "dim {n}").unwrap();
    writeln!(s, "base_order {}", grid.base_order()).unwrap();
    writeln!(s, "orders {}", orders.join(" ")).unwrap();
    writeln!(s, "guaranteed_degree {}", grid.guaranteed_degree()).unwrap();
    writeln!(s, "points {}", grid.len()).unwrap();
    writeln!(s, "checksum {}", grid.checksum()).unwrap();
    writeln!(s, "# angle_1..angle_{} x_1..x_{n} weight", n - 1).unwrap();
    for (x, &w) in grid.points().zip(grid.weights()) {
        let angles = angles_of(x)?;
        let row: Vec<String> = angles.iter().chain(x).chain(std::iter::once(&w)).map(|&v| fmt_f64(v)).collect();
        writeln!(s, "{}", row.join(" ")).unwrap();
    }
    Ok(s)
}

pub fn write_manifest(grid: &SphereGrid, path: &Path) -> Result<()> {
    std::fs::write(path, render_manifest(grid)?)?;
    Ok(())
}

fn bad(what: impl std::fmt::Display) -> Error {
    Error::integrity(format!("malformed file: {what}"))
}

type Sections<'a> = (Vec<(&'a str, &'a str)>, Vec<&'a str>);

/// Splits a file into `key value` header lines and data rows. Header lines
/// come before the first row; lines starting with `#` are comments.
fn split_sections<'a>(text: &'a str, magic: &str) -> Result<Sections<'a>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(first) if first.trim_end() == magic => {}
        _ => return Err(bad(format!("missing '{magic}' header"))),
    }
    let mut header = Vec::new();
    let mut rows = Vec::new();
    for line in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let first = line.split_whitespace().next().unwrap_or("");
        let is_key = first.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) && first.parse::<f64>().is_err();
        if is_key && rows.is_empty() {
            let value = line[first.len()..].trim();
            header.push((first, value));
        } else {
            rows.push(line);
        }
    }
    Ok((header, rows))
}

fn header_value<'a>(header: &[(&'a str, &'a str)], key: &str) -> Result<&'a str> {
    header.iter().find(|(k, _)| *k == key).map(|(_, v)| *v).ok_or_else(|| bad(format!("missing '{key}'")))
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| bad(format!("cannot parse {what} from '{s}'")))
}

pub fn parse_manifest(text: &str) -> Result<SphereGrid> {
    let (header, rows) = split_sections(text, MANIFEST_MAGIC)?;
    let n: usize = parse_num(header_value(&header, "dim")?, "dim")?;
    let dim = AmbientDim::new(n).map_err(|_| bad(format!("invalid dimension {n}")))?;
    let base_order: usize = parse_num(header_value(&header, "base_order")?, "base_order")?;
    let orders = header_value(&header, "orders")?
        .split_whitespace()
        .map(|o| parse_num::<usize>(o, "level order"))
        .collect::<Result<Vec<_>>>()?;
    let degree: usize = parse_num(header_value(&header, "guaranteed_degree")?, "guaranteed_degree")?;
    let points: usize = parse_num(header_value(&header, "points")?, "points")?;
    let stated = header_value(&header, "checksum")?;
    if rows.len() != points {
        return Err(Error::integrity(format!("header declares {points} points but {} rows follow", rows.len())));
    }
    let width = 2 * n;
    let mut coords = Vec::with_capacity(points * n);
    let mut weights = Vec::with_capacity(points);
    for (i, row) in rows.iter().enumerate() {
        let vals = row.split_whitespace().map(|v| parse_num::<f64>(v, "grid entry")).collect::<Result<Vec<_>>>()?;
        if vals.len() != width {
            return Err(bad(format!("row {i} has {} columns, expected {width}", vals.len())));
        }
        // angles are redundant with the coordinates but must agree with them
        let from_angles = angles_to_cartesian(&vals[..n - 1], dim).map_err(|e| bad(format!("row {i}: {e}")))?;
        let x = &vals[n - 1..2 * n - 1];
        if from_angles.coords().iter().zip(x).any(|(a, b)| (a - b).abs() > 1e-12) {
            return Err(Error::integrity(format!("row {i}: angles disagree with coordinates")));
        }
        coords.extend_from_slice(x);
        weights.push(vals[width - 1]);
    }
    let grid = SphereGrid::from_parts(dim, base_order, orders, degree, coords, weights)?;
    if grid.checksum() != stated {
        return Err(Error::integrity(format!(
            "grid checksum mismatch: header says {stated}, rows hash to {}",
            grid.checksum()
        )));
    }
    Ok(grid)
}

pub fn read_manifest(path: &Path) -> Result<SphereGrid> {
    parse_manifest(&std::fs::read_to_string(path)?)
}

pub fn render_values(f: &SampledFunction) -> String {
    let mut s = String::new();
    let kind = match f.kind() {
        ValueKind::Real => "real",
        ValueKind::Complex => "complex",
    };
    writeln!(s, "{VALUES_MAGIC}").unwrap();
    writeln!(s, "grid {}", f.grid().checksum()).unwrap();
    writeln!(s, "kind {kind}").unwrap();
    match f.band_limit() {
        Some(b) => writeln!(s, "band {b}").unwrap(),
        None => writeln!(s, "band none").unwrap(),
    }
    writeln!(s, "rows {}", f.len()).unwrap();
    for v in f.values() {
        match f.kind() {
            ValueKind::Real => writeln!(s, "{}", fmt_f64(v.re)).unwrap(),
            ValueKind::Complex => writeln!(s, "{} {}", fmt_f64(v.re), fmt_f64(v.im)).unwrap(),
        }
    }
    s
}

pub fn write_values(f: &SampledFunction, path: &Path) -> Result<()> {
    std::fs::write(path, render_values(f))?;
    Ok(())
}

/// Parses values and binds them to `grid`, which must carry the checksum the
/// file was written against.
pub fn parse_values(text: &str, grid: Arc<SphereGrid>) -> Result<SampledFunction> {
    let (header, rows) = split_sections(text, VALUES_MAGIC)?;
    let stated = header_value(&header, "grid")?;
    if stated != grid.checksum() {
        return Err(Error::integrity(format!(
            "values were written for grid {stated}, not for grid {}",
            grid.checksum()
        )));
    }
    let kind = match header_value(&header, "kind")? {
        "real" => ValueKind::Real,
        "complex" => ValueKind::Complex,
        other => return Err(bad(format!("unknown value kind '{other}'"))),
    };
    let band = match header_value(&header, "band")? {
        "none" => None,
        b => Some(parse_num::<usize>(b, "band")?),
    };
    let count: usize = parse_num(header_value(&header, "rows")?, "rows")?;
    if rows.len() != count || count != grid.len() {
        return Err(Error::integrity(format!(
            "values file has {} rows (header says {count}) for a grid of {} points",
            rows.len(),
            grid.len()
        )));
    }
    let width = if kind == ValueKind::Real { 1 } else { 2 };
    let mut values = Vec::with_capacity(count);
    for (i, row) in rows.iter().enumerate() {
        let vals = row.split_whitespace().map(|v| parse_num::<f64>(v, "value")).collect::<Result<Vec<_>>>()?;
        if vals.len() != width {
            return Err(bad(format!("value row {i} has {} columns, expected {width}", vals.len())));
        }
        values.push(Complex64::new(vals[0], if width == 2 { vals[1] } else { 0.0 }));
    }
    let f = match kind {
        ValueKind::Real => SampledFunction::new_real(grid, values.iter().map(|v| v.re).collect())?,
        ValueKind::Complex => SampledFunction::new_complex(grid, values)?,
    };
    Ok(match band {
        Some(b) => f.with_band_limit(b),
        None => f,
    })
}

pub fn read_values(path: &Path, grid: Arc<SphereGrid>) -> Result<SampledFunction> {
    parse_values(&std::fs::read_to_string(path)?, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::sphere_grid;

    fn grid(n: usize, m: usize) -> Arc<SphereGrid> {
        Arc::new(sphere_grid(AmbientDim::new(n).unwrap(), m).unwrap())
    }

    #[test]
    fn manifest_round_trip_is_bit_exact() {
        for (n, m) in [(2, 4), (3, 5), (5, 3)] {
            let g = grid(n, m);
            let back = parse_manifest(&render_manifest(&g).unwrap()).unwrap();
            assert_eq!(back, *g);
        }
    }

    #[test]
    fn tampered_manifest_is_rejected() {
        let g = grid(3, 3);
        let text = render_manifest(&g).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        let mut cols: Vec<String> = lines[8].split_whitespace().map(String::from).collect();
        let w: f64 = cols[5].parse().unwrap();
        cols[5] = fmt_f64(w * (1.0 + 1e-15));
        let mut edited: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
        edited[8] = cols.join(" ");
        assert!(matches!(parse_manifest(&edited.join("\n")), Err(Error::Integrity(_))));
        assert!(matches!(parse_manifest("garbage"), Err(Error::Integrity(_))));
        let mut cols: Vec<String> = lines[8].split_whitespace().map(String::from).collect();
        let angle: f64 = cols[0].parse().unwrap();
        cols[0] = fmt_f64(angle + 1e-6);
        edited[8] = cols.join(" ");
        assert!(matches!(parse_manifest(&edited.join("\n")), Err(Error::Integrity(_))));
        let short: String = text.lines().take(10).collect::<Vec<_>>().join("\n");
        assert!(matches!(parse_manifest(&short), Err(Error::Integrity(_))));
    }

    #[test]
    fn values_round_trip_and_checksum() {
        let g = grid(3, 4);
        let f = SampledFunction::from_fn(g.clone(), |x| x[0] - 0.5 * x[2]).with_band_limit(1);
        let back = parse_values(&render_values(&f), g.clone()).unwrap();
        assert_eq!(back.values(), f.values());
        assert_eq!(back.band_limit(), Some(1));
        let c = SampledFunction::from_fn_complex(g.clone(), |x| Complex64::new(x[1], -x[0]));
        let back = parse_values(&render_values(&c), g.clone()).unwrap();
        assert_eq!(back.values(), c.values());
        assert_eq!(back.kind(), ValueKind::Complex);
        let other = grid(3, 5);
        assert!(matches!(parse_values(&render_values(&f), other), Err(Error::Integrity(_))));
    }

    #[test]
    fn io_errors_surface() {
        let g = grid(2, 2);
        let err = write_manifest(&g, Path::new("/nonexistent-dir/grid.txt")).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
