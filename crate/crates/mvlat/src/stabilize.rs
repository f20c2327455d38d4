//! Empirical verification of complex stabilization: sweep (t,u) grids per
//! combinatorial part, detect thresholds, and group families by their
//! stable signature.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::complex::{lattice_complex, signature, Signature};
use crate::geocode::{check_conditions, CombPart, GeometricCode};
use crate::minima::LatticeSpec;
use crate::{Error, Result};

/// One grid cell: the family member b(t), N(t,u) and the signature of its
/// complex. Cells whose member is not a usable lattice (b(t) < 2, or a
/// multiplier sharing a factor with N) carry None.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridCell {
    pub t: u64,
    pub u: u64,
    pub b: u64,
    pub n: u64,
    pub vrm_count: usize,
    pub sig: Option<Signature>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationGrid {
    pub comb: CombPart,
    pub t_max: u64,
    pub u_max: u64,
    /// Row-major cells, u varying fastest.
    pub cells: Vec<GridCell>,
}

impl StabilizationGrid {
    pub fn cell(&self, t: u64, u: u64) -> &GridCell {
        &self.cells[(t * (self.u_max + 1) + u) as usize]
    }
}

/// Build the family member at one grid cell directly from the theorem's
/// formulas b(t) = αat + β, N(t,u) = b(t)(au + γ) + α. The bijection's
/// bound α < b may fail at t = 0; the member is still a lattice and the
/// paper's own worked examples sweep it, so it is kept.
fn cell_lattice(comb: &CombPart, t: u64, u: u64) -> (u64, u64, Option<LatticeSpec>) {
    let b = comb.b_of(t);
    let n = comb.n_of(t, u);
    if b < 1 || n < 1 {
        return (b, n, None);
    }
    let spec = LatticeSpec { a: comb.a, b, n };
    if !spec.coprime() {
        return (b, n, None);
    }
    (b, n, Some(spec))
}

/// Sweep the (t,u) grid of one combinatorial part.
pub fn sweep(comb: &CombPart, t_max: u64, u_max: u64) -> Result<StabilizationGrid> {
    let code = GeometricCode { comb: *comb, t: 1, u: 1 };
    let cc = check_conditions(&code);
    if !cc.cond31 || !cc.cond32 {
        return Err(Error::Domain(format!(
            "sweep: combinatorial part {comb} violates the code conditions"
        )));
    }
    let coords: Vec<(u64, u64)> = (0..=t_max)
        .flat_map(|t| (0..=u_max).map(move |u| (t, u)))
        .collect();
    let cells: Vec<GridCell> = coords
        .par_iter()
        .map(|&(t, u)| -> Result<GridCell> {
            let (b, n, spec) = cell_lattice(comb, t, u);
            match spec {
                None => Ok(GridCell { t, u, b, n, vrm_count: 0, sig: None }),
                Some(spec) => {
                    let c = lattice_complex(&spec)?;
                    Ok(GridCell {
                        t,
                        u,
                        b,
                        n,
                        vrm_count: c.faces.len(),
                        sig: Some(signature(&c)?),
                    })
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilizationGrid { comb: *comb, t_max, u_max, cells })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationReport {
    pub comb: CombPart,
    pub t_max: u64,
    pub u_max: u64,
    /// Minimal thresholds with all valid cells t > t0, u > u0 sharing the
    /// stable signature; None when the margin row or column still varies.
    pub t0: Option<u64>,
    pub u0: Option<u64>,
    pub stable_sig: Signature,
    /// Per fixed u: minimal T with the row constant for t >= T.
    pub row_thresholds: Vec<Option<u64>>,
    /// Per fixed t: minimal U with the column constant for u >= U.
    pub col_thresholds: Vec<Option<u64>>,
    /// Valid cells disagreeing with the stable signature.
    pub exceptional_cells: Vec<(u64, u64)>,
    pub distinct_signatures: usize,
    pub stabilized_within_grid: bool,
}

/// Detect stabilization thresholds inside the grid. The theorem is
/// existential, so the only honest claim is relative to the sweep: the
/// outermost row and column must already have settled.
pub fn detect_thresholds(grid: &StabilizationGrid) -> Result<StabilizationReport> {
    if grid.t_max < 2 || grid.u_max < 2 {
        return Err(Error::Domain("detect_thresholds: grid must be at least 3x3".into()));
    }
    let corner = grid
        .cell(grid.t_max, grid.u_max)
        .sig
        .clone()
        .ok_or_else(|| Error::Domain("detect_thresholds: corner cell invalid".into()))?;

    // rectangle {t > t0, u > u0} must be constant; find the componentwise
    // smallest admissible pair by scanning t0 upward
    let rect_ok = |t0: u64, u0: u64| -> bool {
        (t0 + 1..=grid.t_max).all(|t| {
            (u0 + 1..=grid.u_max).all(|u| grid.cell(t, u).sig.as_ref() == Some(&corner))
        })
    };
    let mut best: Option<(u64, u64)> = None;
    for t0 in 0..grid.t_max {
        let mut u0_min = None;
        for u0 in (0..grid.u_max).rev() {
            if rect_ok(t0, u0) {
                u0_min = Some(u0);
            } else {
                break;
            }
        }
        if let Some(u0) = u0_min {
            best = Some((t0, u0));
            break;
        }
    }

    let row_thresholds: Vec<Option<u64>> = (0..=grid.u_max)
        .map(|u| {
            let last = grid.cell(grid.t_max, u).sig.clone()?;
            let mut th = None;
            for t in (0..=grid.t_max).rev() {
                if grid.cell(t, u).sig.as_ref() == Some(&last) {
                    th = Some(t);
                } else {
                    break;
                }
            }
            // margin: a threshold equal to t_max means nothing settled
            th.filter(|&t| t < grid.t_max)
        })
        .collect();
    let col_thresholds: Vec<Option<u64>> = (0..=grid.t_max)
        .map(|t| {
            let last = grid.cell(t, grid.u_max).sig.clone()?;
            let mut th = None;
            for u in (0..=grid.u_max).rev() {
                if grid.cell(t, u).sig.as_ref() == Some(&last) {
                    th = Some(u);
                } else {
                    break;
                }
            }
            th.filter(|&u| u < grid.u_max)
        })
        .collect();

    let exceptional: Vec<(u64, u64)> = grid
        .cells
        .iter()
        .filter(|c| c.sig.is_some() && c.sig.as_ref() != Some(&corner))
        .map(|c| (c.t, c.u))
        .collect();
    let mut sigs: Vec<&Signature> = grid.cells.iter().filter_map(|c| c.sig.as_ref()).collect();
    sigs.sort();
    sigs.dedup();

    let stabilized = matches!(best, Some((t0, u0)) if t0 + 1 < grid.t_max && u0 + 1 < grid.u_max);
    Ok(StabilizationReport {
        comb: grid.comb,
        t_max: grid.t_max,
        u_max: grid.u_max,
        t0: best.map(|b| b.0),
        u0: best.map(|b| b.1),
        stable_sig: corner,
        row_thresholds,
        col_thresholds,
        exceptional_cells: exceptional,
        distinct_signatures: sigs.len(),
        stabilized_within_grid: stabilized,
    })
}

/// Cross-family partition: group combinatorial parts by stable signature.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyReport {
    pub reports: Vec<StabilizationReport>,
    /// Groups of comb indices with identical stable signatures.
    pub groups: Vec<Vec<usize>>,
}

pub fn family_report(combs: &[CombPart], t_max: u64, u_max: u64) -> Result<FamilyReport> {
    let reports: Vec<StabilizationReport> = combs
        .par_iter()
        .map(|comb| detect_thresholds(&sweep(comb, t_max, u_max)?))
        .collect::<Result<Vec<_>>>()?;
    let mut by_sig: BTreeMap<&Signature, Vec<usize>> = BTreeMap::new();
    for (i, r) in reports.iter().enumerate() {
        by_sig.entry(&r.stable_sig).or_default().push(i);
    }
    let mut groups: Vec<Vec<usize>> = by_sig.into_values().collect();
    groups.sort();
    Ok(FamilyReport { reports, groups })
}

/// CSV lines for a sweep: comb, t, u, a, b, N, signature hash, |vrm|.
pub fn grid_csv(grid: &StabilizationGrid) -> String {
    let mut s = String::from("comb,t,u,a,b,N,sig_hash,vrm\n");
    for c in &grid.cells {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            grid.comb,
            c.t,
            c.u,
            grid.comb.a,
            c.b,
            c.n,
            c.sig.as_ref().map_or("invalid".to_string(), |x| x.short_hash()),
            c.vrm_count
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comb_1_1_0_2_stabilizes_by_2() {
        let grid = sweep(&CombPart::new(1, 1, 0, 2), 6, 6).unwrap();
        let rep = detect_thresholds(&grid).unwrap();
        assert!(rep.stabilized_within_grid);
        assert!(rep.t0.unwrap() <= 2 && rep.u0.unwrap() <= 2, "{:?}", (rep.t0, rep.u0));
        // the table row says stable from u,v >= 2: cells with t,u >= 2 agree
        let s22 = grid.cell(2, 2).sig.clone().unwrap();
        for t in 2..=6 {
            for u in 2..=6 {
                assert_eq!(grid.cell(t, u).sig.as_ref(), Some(&s22));
            }
        }
    }

    #[test]
    fn comb_2_1_1_2_stabilizes_by_1() {
        let grid = sweep(&CombPart::new(2, 1, 1, 2), 6, 6).unwrap();
        let s11 = grid.cell(1, 1).sig.clone().unwrap();
        for t in 1..=6 {
            for u in 1..=6 {
                assert_eq!(grid.cell(t, u).sig.as_ref(), Some(&s11), "cell ({t},{u})");
            }
        }
    }

    #[test]
    fn determinism_cell_recompute() {
        let comb = CombPart::new(3, 2, 1, 2);
        let g1 = sweep(&comb, 3, 3).unwrap();
        let g2 = sweep(&comb, 3, 3).unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn grid_growth_keeps_stable_signature() {
        for comb in [
            CombPart::new(1, 1, 0, 2),
            CombPart::new(2, 1, 1, 2),
            CombPart::new(3, 2, 0, 2),
            CombPart::new(4, 1, 1, 2),
            CombPart::new(5, 2, 1, 2),
        ] {
            let small = detect_thresholds(&sweep(&comb, 6, 6).unwrap()).unwrap();
            let large = detect_thresholds(&sweep(&comb, 8, 8).unwrap()).unwrap();
            assert_eq!(small.stable_sig, large.stable_sig, "{comb}");
        }
    }

    #[test]
    fn finitely_many_types_in_t0_family() {
        // the Γ(2,26,121) family
        let grid = sweep(&CombPart::new(17, 26, 0, 2), 6, 6).unwrap();
        let rep = detect_thresholds(&grid).unwrap();
        assert!(rep.distinct_signatures >= 1);
        assert!(rep.stabilized_within_grid);
    }

    #[test]
    fn rejects_invalid_comb() {
        // gcd(alpha, beta) = 2
        assert!(sweep(&CombPart::new(2, 2, 1, 2), 4, 4).is_err());
    }

    #[test]
    fn csv_deterministic() {
        let grid = sweep(&CombPart::new(1, 1, 0, 2), 3, 3).unwrap();
        let a = grid_csv(&grid);
        let b = grid_csv(&sweep(&CombPart::new(1, 1, 0, 2), 3, 3).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with("comb,t,u,a,b,N,sig_hash,vrm\n"));
        assert_eq!(a.lines().count(), 17); // header + 16 cells
    }
}
