use rayon::prelude::*;

use complementarity_core::ccr::effective_x;
use complementarity_core::{ccr_report, CcrReport, ChannelKind, ChannelSpec};

use crate::config::SweepConfig;
use crate::ScanError;

/// One grid point; the order of these is the output order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub kind: ChannelKind,
    pub mu: f64,
    pub x: f64,
    pub p: f64,
}

/// Channels in the order given (duplicates dropped), then x ascending, then p
/// ascending. Bit flip collapses to its single `x`.
pub fn grid(cfg: &SweepConfig) -> Vec<GridPoint> {
    let mut kinds: Vec<ChannelKind> = Vec::new();
    for k in &cfg.channels {
        if !kinds.contains(k) {
            kinds.push(*k);
        }
    }
    let ps = cfg.p_grid.points();
    let mut out = Vec::new();
    for kind in kinds {
        let mut xs: Vec<f64> = cfg.x_values.iter().map(|&x| effective_x(kind, x)).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let mu = if kind == ChannelKind::CorrelatedAmplitudeDamping { cfg.mu } else { 0.0 };
        for &x in &xs {
            for &p in &ps {
                out.push(GridPoint { kind, mu, x, p });
            }
        }
    }
    out
}

pub fn evaluate(point: &GridPoint) -> Result<CcrReport, ScanError> {
    let spec = ChannelSpec::with_memory(point.kind, point.p, point.mu)?;
    Ok(ccr_report(&spec, point.x)?)
}

/// Evaluate the whole grid in parallel; the result keeps grid order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<CcrReport>, ScanError> {
    cfg.validate()?;
    grid(cfg).par_iter().map(evaluate).collect()
}
