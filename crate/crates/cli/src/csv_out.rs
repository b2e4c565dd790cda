//! Probe-labelled front CSV.

use std::fmt::Write as _;
use std::path::Path;

use vecdual_core::weak_sets::{classify, FrontSet, Label, ProbeGrid};

use crate::scenario::Window;
use crate::CliError;

pub fn probe_grid(window: Window, dim: usize) -> ProbeGrid {
    let res = if window.hi < window.lo { 0 } else { window.res };
    ProbeGrid::new(vec![window.lo; dim], vec![window.hi; dim], res)
}

/// Header `y1,...,ym,label`, then one row per probe of the window with its
/// label against the front. An empty window gives the header alone.
pub fn front_csv(front: &FrontSet, window: Window) -> Result<String, CliError> {
    let m = front.dim();
    let mut out = String::new();
    for i in 1..=m {
        let _ = write!(out, "y{i},");
    }
    out.push_str("label\n");
    let grid = probe_grid(window, m);
    if grid.is_empty() {
        return Ok(out);
    }
    if !front.is_finite() {
        return Err(CliError::Schema(format!("cannot label probes against a {:?} front", front.kind())));
    }
    for y in grid.points() {
        let label = match classify(front, &y)? {
            Label::Below => "Below",
            Label::On => "On",
            Label::Above => "Above",
        };
        for v in &y {
            let _ = write!(out, "{v},");
        }
        out.push_str(label);
        out.push('\n');
    }
    Ok(out)
}

pub fn emit_front_csv(front: &FrontSet, window: Window, path: &Path) -> Result<(), CliError> {
    let text = front_csv(front, window)?;
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use vecdual_core::cone_order::PolyhedralCone;
    use vecdual_core::weak_sets::wsup;

    fn origin() -> FrontSet {
        wsup(&[vec![0.0, 0.0]], &PolyhedralCone::orthant(2)).unwrap()
    }

    #[test]
    fn origin_front_on_the_unit_window() {
        let text = front_csv(&origin(), Window { lo: -2.0, hi: 2.0, res: 41 }).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "y1,y2,label");
        assert_eq!(lines.len(), 1 + 41 * 41);
        assert_eq!(lines[1], "-2,-2,Below");
        assert!(lines.contains(&"0,0,On"));
        assert!(lines.contains(&"0.1,0.1,Above"));
        assert!(lines.contains(&"-1,0,On"));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn empty_window_is_header_only() {
        let text = front_csv(&origin(), Window { lo: 1.0, hi: 0.0, res: 11 }).unwrap();
        assert_eq!(text, "y1,y2,label\n");
        let text = front_csv(&origin(), Window { lo: 0.0, hi: 1.0, res: 0 }).unwrap();
        assert_eq!(text, "y1,y2,label\n");
    }

    #[test]
    fn infinite_fronts_are_rejected() {
        let p = FrontSet::plus_infinity(&PolyhedralCone::orthant(2));
        assert!(front_csv(&p, Window { lo: 0.0, hi: 1.0, res: 3 }).is_err());
    }
}
