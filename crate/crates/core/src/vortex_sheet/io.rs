use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::SheetState;
use crate::error::Result;

/// Streams marker trajectories as CSV: `step,t,marker_index,x,y,gamma`.
pub struct TrajectoryWriter {
    out: BufWriter<File>,
}

impl TrajectoryWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "step,t,marker_index,x,y,gamma")?;
        Ok(Self { out })
    }

    pub fn record(&mut self, step: usize, s: &SheetState) -> Result<()> {
        for (i, (p, g)) in s.curve.markers().iter().zip(&s.gamma).enumerate() {
            writeln!(self.out, "{step},{:?},{i},{:?},{:?},{:?}", s.t, p.x, p.y, g)?;
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

/// Writes `key = value` lines, one per entry, in the given order.
pub fn write_run_metadata(path: &Path, entries: &[(&str, String)]) -> Result<()> {
    let mut out = String::new();
    for (k, v) in entries {
        out.push_str(&format!("{k} = {v}\n"));
    }
    std::fs::write(path, out)?;
    Ok(())
}
