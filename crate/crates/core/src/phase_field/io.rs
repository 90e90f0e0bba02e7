//! Field snapshot files.
//!
//! A snapshot is a plain-text header of `key value` lines terminated by
//! `end_header`, followed by `nx·ny` little-endian IEEE-754 doubles in
//! row-major order (index `j·nx + i`, x fastest):
//!
//! ```text
//! HSFIELD 1
//! nx 128
//! ny 128
//! Lx 1
//! Ly 2
//! t 0.015
//! eps 0.02
//! boundary_y fixed
//! name phi
//! end_header
//! <binary block>
//! ```

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{BoundaryY, ScalarField2D};

const MAGIC: &str = "HSFIELD 1";

pub fn write_snapshot(
    path: &Path,
    field: &ScalarField2D,
    name: &str,
    t: f64,
    eps: f64,
) -> Result<()> {
    let mut out = Vec::with_capacity(field.values().len() * 8 + 256);
    let boundary = match field.boundary() {
        BoundaryY::Periodic => "periodic",
        BoundaryY::Fixed => "fixed",
    };
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "nx {}", field.nx())?;
    writeln!(out, "ny {}", field.ny())?;
    writeln!(out, "Lx {:?}", field.lx())?;
    writeln!(out, "Ly {:?}", field.ly())?;
    writeln!(out, "t {t:?}")?;
    writeln!(out, "eps {eps:?}")?;
    writeln!(out, "boundary_y {boundary}")?;
    writeln!(out, "name {name}")?;
    writeln!(out, "end_header")?;
    for v in field.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Snapshot contents: the field, its name, time and ε.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub field: ScalarField2D,
    pub name: String,
    pub t: f64,
    pub eps: f64,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(format!("snapshot: {}", msg.into()))
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let file = std::fs::File::open(path)
        .map_err(|_| Error::MissingArtifact(path.display().to_string()))?;
    let mut reader = BufReader::new(file);
    let mut line = String::new();
    reader.read_line(&mut line)?;
    if line.trim_end() != MAGIC {
        return Err(bad("missing HSFIELD header"));
    }
    let (mut nx, mut ny, mut lx, mut ly, mut t, mut eps) = (0usize, 0usize, 0.0, 0.0, 0.0, 0.0);
    let mut boundary = BoundaryY::Periodic;
    let mut name = String::new();
    loop {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            return Err(bad("header not terminated"));
        }
        let l = line.trim_end();
        if l == "end_header" {
            break;
        }
        let (k, v) = l.split_once(' ').ok_or_else(|| bad(format!("bad line `{l}`")))?;
        let num = |v: &str| v.parse::<f64>().map_err(|_| bad(format!("bad number `{v}`")));
        match k {
            "nx" => nx = v.parse().map_err(|_| bad("bad nx"))?,
            "ny" => ny = v.parse().map_err(|_| bad("bad ny"))?,
            "Lx" => lx = num(v)?,
            "Ly" => ly = num(v)?,
            "t" => t = num(v)?,
            "eps" => eps = num(v)?,
            "boundary_y" => {
                boundary = match v {
                    "periodic" => BoundaryY::Periodic,
                    "fixed" => BoundaryY::Fixed,
                    _ => return Err(bad(format!("unknown boundary `{v}`"))),
                }
            }
            "name" => name = v.to_string(),
            _ => {}
        }
    }
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    if bytes.len() != nx * ny * 8 {
        return Err(bad(format!(
            "expected {} data bytes, found {}",
            nx * ny * 8,
            bytes.len()
        )));
    }
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let field = ScalarField2D::new(nx, ny, lx, ly, boundary)?.with_values(values)?;
    Ok(Snapshot { field, name, t, eps })
}

/// CSV with columns `i,j,x,y,value`; intended for small grids.
pub fn write_field_csv(path: &Path, field: &ScalarField2D) -> Result<()> {
    let mut out = String::from("i,j,x,y,value\n");
    for j in 0..field.ny() {
        for i in 0..field.nx() {
            let p = field.node(i, j);
            out.push_str(&format!("{i},{j},{:?},{:?},{:?}\n", p.x, p.y, field.at(i, j)));
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let f = ScalarField2D::from_fn(9, 12, 1.0, 2.5, BoundaryY::Fixed, |x, y| (x * 7.1).sin() + y / 3.0)
            .unwrap();
        let path = dir.path().join("phi.hsf");
        write_snapshot(&path, &f, "phi", 0.125, 0.02).unwrap();
        let s = read_snapshot(&path).unwrap();
        assert_eq!(s.field, f);
        assert_eq!(s.name, "phi");
        assert_eq!(s.t, 0.125);
        assert_eq!(s.eps, 0.02);
    }

    #[test]
    fn truncated_snapshot_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let f = ScalarField2D::new(8, 8, 1.0, 1.0, BoundaryY::Periodic).unwrap();
        let path = dir.path().join("u.hsf");
        write_snapshot(&path, &f, "u", 0.0, 0.1).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes.truncate(bytes.len() - 3);
        std::fs::write(&path, bytes).unwrap();
        assert!(read_snapshot(&path).is_err());
    }
}
