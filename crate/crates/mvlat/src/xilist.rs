//! Structural classification of relative minima, the Ξ candidate list,
//! the fast VRM path and the affine-form check on candidate coordinates.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::geocode::{check_conditions, encode_triple, CombPart, GeometricCode};
use crate::minima::{pareto_minimal, LatticeSpec, Point3};
use crate::numth::{modular_companion, sym_mod_u128};
use crate::{Error, Result};

/// Half-open interval [lo, hi) with exact rational endpoints lo = a/d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo_num: i128,
    pub hi_num: i128,
    pub den: i128,
}

impl Interval {
    fn new(lo_num: i128, hi_num: i128, den: i128) -> Interval {
        Interval { lo_num: lo_num.min(hi_num), hi_num, den }
    }

    pub fn is_empty(&self) -> bool {
        self.lo_num >= self.hi_num
    }

    pub fn len_num(&self) -> i128 {
        (self.hi_num - self.lo_num).max(0)
    }
}

/// Partition of I = [0, N/2) into the intervals I_{k,1}, I_{k,2}, I_{k,3}
/// per k; the t = 0 variant has no middle part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalPartition {
    pub n: u64,
    pub a: u64,
    /// a·u + γ, the quantity the middle interval is measured by.
    pub auq: u64,
    pub t_zero: bool,
    /// per k: (I_k, I_{k,1}, I_{k,2} or None, I_{k,3})
    pub parts: Vec<(Interval, Interval, Option<Interval>, Interval)>,
}

/// Exact partition with denominators 2a (all endpoints are multiples of
/// 1/(2a) shifted by integers). Sub-intervals are clamped into I_k, which
/// only matters for tiny N where the paper's formulas overlap.
pub fn partition_intervals(code: &GeometricCode) -> Result<IntervalPartition> {
    let (_, _, n) = decoded_dims(code)?;
    let a = code.comb.a;
    let auq = a * code.u + code.comb.gamma;
    let t_zero = code.t == 0;
    let d = 2 * a as i128;
    let n = n as i128;
    let mut parts = Vec::new();
    for k in 0..a as i128 {
        let lo = k * n; // k/(2a)·N in units of 1/(2a)
        let hi = (k + 1) * n;
        let ik = Interval::new(lo, hi, d);
        let clamp = |x: i128| x.clamp(lo, hi);
        let (i1, i2, i3) = if k % 2 == 0 {
            let one = clamp(lo + d);
            let mid = clamp(lo + d * auq as i128);
            (
                Interval::new(lo, one, d),
                (!t_zero).then(|| Interval::new(one, mid, d)),
                if t_zero {
                    Interval::new(one, hi, d)
                } else {
                    Interval::new(mid, hi, d)
                },
            )
        } else {
            let one = clamp(hi - d);
            let mid = clamp(hi - d * auq as i128);
            (
                Interval::new(one, hi, d),
                (!t_zero).then(|| Interval::new(mid, one, d)),
                if t_zero {
                    Interval::new(lo, one, d)
                } else {
                    Interval::new(lo, mid, d)
                },
            )
        };
        parts.push((ik, i1, i2, i3));
    }
    Ok(IntervalPartition { n: n as u64, a, auq, t_zero, parts })
}

fn decoded_dims(code: &GeometricCode) -> Result<(u64, u64, u64)> {
    let a = code.comb.a;
    let b = code.comb.b_of(code.t);
    let n = code.comb.n_of(code.t, code.u);
    if b < 2 || n < 2 {
        return Err(Error::Domain(format!("xi list: degenerate family member b={b}, N={n}")));
    }
    Ok((a, b, n))
}

/// Candidate kind within the Ξ list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum XiKind {
    Type1 { k: u64 },
    Type2 { k: u64, eps: u64, slot: u8 },
    Type3 { k: u64 },
    Axis { axis: u8 },
}

/// One Ξ entry: the candidate fold together with its provenance. Entries
/// whose first coordinate falls outside [1, N/2] are retained for
/// bookkeeping but flagged so the minima filter skips them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiEntry {
    pub kind: XiKind,
    /// Raw first coordinate produced by the structural formulas
    /// (axis entries carry N here).
    pub raw_x: i128,
    /// The folded point, when raw_x is admissible.
    pub point: Option<Point3>,
}

/// The structural candidate list Ξ. For t >= 1 it has exactly
/// α + 5a + 3 entries: a of type 1, 4a of type 2, α of type 3 and the
/// three axis points. For t = 0 the type-2 entries disappear and type 3
/// extends to β entries.
pub fn xi_list(spec: &LatticeSpec, code: &GeometricCode) -> Result<Vec<XiEntry>> {
    let (a, b, n) = decoded_dims(code)?;
    let alpha = code.comb.alpha;
    let beta = code.comb.beta;
    let mut out = Vec::new();

    let fold_checked = |raw: i128| -> Option<Point3> {
        if raw < 1 || raw > (n / 2) as i128 {
            None
        } else {
            Some(spec.fold(raw as u64))
        }
    };

    // type 1: the unique integer of each unit interval I_{k,1}
    for k in 0..a {
        let raw = if k % 2 == 0 {
            // ceil(k·N / 2a)
            div_ceil(k as i128 * n as i128, 2 * a as i128)
        } else {
            // the integer inside [(k+1)N/2a - 1, (k+1)N/2a); equals the
            // floor except when the right endpoint is itself an integer
            div_ceil((k + 1) as i128 * n as i128, 2 * a as i128) - 1
        };
        out.push(XiEntry { kind: XiKind::Type1 { k }, raw_x: raw, point: fold_checked(raw) });
    }

    // type 2: both unit-interval endpoints around the two roots of
    // f(x) = |bx|_N adjacent to the anchor K·N/a, where 2K is the even
    // endpoint of I_k (K = k/2 for even k, (k+1)/2 for odd k). I_{k,2}
    // sits just above the anchor for even k and just below it for odd k,
    // so with M = ⌊Kb/a⌋ the relevant roots are m·N/b with
    // m in {M+1, M+2} (even, M when the anchor is itself a root) and
    // m in {M-1, M} (odd). The raw value is the affine lift; its
    // symmetric residue lands back in [0, N/2].
    if code.t >= 1 {
        for k in 0..a {
            let kk = k.div_ceil(2) as i128;
            let frac = (kk * beta as i128).rem_euclid(a as i128); // a·{Kβ/a}
            let m_floor = (kk * b as i128 - frac) / a as i128;
            for eps in 0..2u64 {
                for slot in 0..2u8 {
                    let m = if k % 2 == 0 {
                        m_floor + i128::from(frac > 0) + slot as i128
                    } else {
                        m_floor - 1 + slot as i128
                    };
                    let raw = div_floor(m * n as i128, b as i128) + eps as i128;
                    let folded = {
                        let r = raw.rem_euclid(n as i128);
                        r.min(n as i128 - r)
                    };
                    out.push(XiEntry {
                        kind: XiKind::Type2 { k, eps, slot },
                        raw_x: raw,
                        point: fold_checked(folded),
                    });
                }
            }
        }
    }

    // type 3: x = |b'k|_N with |b·b'|_N = 1, bounded last coordinate
    let type3_count = if code.t >= 1 { alpha } else { beta };
    let bp = modular_companion(b % n, n)? as u128;
    for k in 1..=type3_count {
        let x = sym_mod_u128(bp * k as u128, n) as i128;
        out.push(XiEntry { kind: XiKind::Type3 { k }, raw_x: x, point: fold_checked(x) });
    }

    // the three axis points
    for (axis, p) in [
        Point3::new(n, 0, 0),
        Point3::new(0, n, 0),
        Point3::new(0, 0, n),
    ]
    .into_iter()
    .enumerate()
    {
        out.push(XiEntry { kind: XiKind::Axis { axis: axis as u8 }, raw_x: n as i128, point: Some(p) });
    }
    Ok(out)
}

/// Fast relative minima: build Ξ, deduplicate, keep the dominance-minimal
/// elements. Sound because the list contains every relative minimum and
/// consists of genuine folds, so each non-minimal candidate is dominated
/// by a minimum that is itself in the list.
pub fn vrm_fast(spec: &LatticeSpec) -> Result<Vec<Point3>> {
    let spec = LatticeSpec::new(spec.a % spec.n.max(1), spec.b % spec.n.max(1), spec.n)
        .and_then(|s| if s.coprime() { Ok(s) } else { Err(Error::Domain("".into())) })
        .map_err(|_| {
            Error::Domain(format!(
                "vrm_fast: gcd(a,N) and gcd(b,N) must be 1 for ({},{},{})",
                spec.a, spec.b, spec.n
            ))
        })?;
    let code = encode_triple(spec.a, spec.b, spec.n)?;
    let entries = xi_list(&spec, &code)?;
    let candidates: BTreeSet<Point3> = entries.iter().filter_map(|e| e.point).collect();
    let cand: Vec<Point3> = candidates.into_iter().collect();
    Ok(pareto_minimal(&cand))
}

/// Number of candidate constructions xi_list performs; depends only on
/// the combinatorial part (for t >= 1).
pub fn xi_work(code: &GeometricCode) -> u64 {
    let CombPart { alpha, beta, a, .. } = code.comb;
    if code.t >= 1 {
        alpha + 5 * a + 3
    } else {
        a + beta + 3
    }
}

/// A fitted affine form  value = A·N + C·p + D  (p is u or t depending on
/// the coordinate), with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineForm {
    /// numerators over `den`
    pub a_num: i128,
    pub c_num: i128,
    pub d_num: i128,
    pub den: i128,
}

impl AffineForm {
    pub fn eval(&self, n: i128, p: i128) -> Option<i128> {
        let v = self.a_num * n + self.c_num * p + self.d_num;
        (v % self.den == 0).then_some(v / self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineReport {
    pub entry: usize,
    pub forms: [AffineForm; 3],
    /// grid points where a fitted form failed to reproduce the value
    pub residuals: Vec<(u64, u64, usize)>,
}

/// Pre-fold coordinate lifts of the s-th Ξ entry over the (t,u) grid.
///
/// The first coordinate is the raw formula value x. The second and third
/// are the affine lifts ax - (aA1)·N and bx - (aA1)·α·t·N, where A1 is
/// the fitted leading coefficient of x; both are congruent to the folded
/// coordinates mod N and are exactly affine for t,u >= 1.
fn entry_lifts(comb: &CombPart, s: usize, t: u64, u: u64) -> Result<(i128, i128, i128, i128)> {
    let spec_code = GeometricCode { comb: *comb, t, u };
    let (a, b, n) = decoded_dims(&spec_code)?;
    let spec = LatticeSpec::new(a % n, b % n, n)?;
    let entries = xi_list(&spec, &spec_code)?;
    let e = entries
        .get(s)
        .ok_or_else(|| Error::Domain(format!("affine check: entry index {s} out of range")))?;
    match e.kind {
        XiKind::Type3 { k } => {
            // natural pre-fold (k·b', a·k·b', k)
            let bp = modular_companion(b % n, n)? as i128;
            let x = bp * k as i128;
            Ok((x, a as i128 * x, k as i128, n as i128))
        }
        XiKind::Axis { axis } => {
            let n = n as i128;
            let coords = match axis {
                0 => (n, 0, 0),
                1 => (0, n, 0),
                _ => (0, 0, n),
            };
            Ok((coords.0, coords.1, coords.2, n))
        }
        _ => Ok((e.raw_x, 0, 0, n as i128)), // y,z lifts filled in later
    }
}

/// Fit A, C, D per coordinate of the s-th entry from three grid points and
/// verify the remaining grid exactly.
pub fn affine_form_check(
    comb: &CombPart,
    s: usize,
    grid: &[(u64, u64)],
) -> Result<AffineReport> {
    if grid.iter().any(|&(t, u)| t == 0 || u == 0) {
        return Err(Error::Domain("affine check: grid points need t,u >= 1".into()));
    }
    if grid.len() < 4 {
        return Err(Error::Domain("affine check: need at least 4 grid points".into()));
    }
    let code0 = GeometricCode { comb: *comb, t: grid[0].0, u: grid[0].1 };
    if !check_conditions(&code0).cond31 {
        return Err(Error::Domain("affine check: conditions (3.1) fail".into()));
    }

    // observation rows (N, p, value) per coordinate; p = u for the first two
    // coordinates and p = t for the last one
    let alpha = comb.alpha as i128;
    let a = comb.a as i128;
    let mut obs: [Vec<(i128, i128, i128)>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    let mut raw_rows = Vec::new();
    for &(t, u) in grid {
        let (x, y3, z3, n) = entry_lifts(comb, s, t, u)?;
        raw_rows.push((t, u, x, y3, z3, n));
        obs[0].push((n, u as i128, x));
    }
    // fit the first coordinate, then build the derived lifts
    let f1 = fit_affine(&obs[0])?;
    let is_type3_or_axis = {
        let code = GeometricCode { comb: *comb, t: grid[0].0, u: grid[0].1 };
        let (aa, bb, nn) = decoded_dims(&code)?;
        let spec = LatticeSpec::new(aa % nn, bb % nn, nn)?;
        matches!(
            xi_list(&spec, &code)?[s].kind,
            XiKind::Type3 { .. } | XiKind::Axis { .. }
        )
    };
    let a_whole = if is_type3_or_axis {
        0 // natural pre-fold coordinates, no lift needed
    } else {
        // type 1/2 satisfy x = (A/a)N + Cu + D with integer A
        if (a * f1.a_num) % f1.den != 0 {
            return Err(Error::Internal("affine check: a·A1 is not an integer".into()));
        }
        a * f1.a_num / f1.den
    };
    for &(t, u, x, y3, z3, n) in &raw_rows {
        if is_type3_or_axis {
            obs[1].push((n, u as i128, y3));
            obs[2].push((n, t as i128, z3));
        } else {
            // y lift: a·x - (a·A1)·N; z lift: b·x - (a·A1)·α·t·N
            let b = comb.b_of(t) as i128;
            obs[1].push((n, u as i128, a * x - a_whole * n));
            obs[2].push((n, t as i128, b * x - a_whole * alpha * t as i128 * n));
        }
    }

    let forms = [f1, fit_affine(&obs[1])?, fit_affine(&obs[2])?];
    let mut residuals = Vec::new();
    for (gi, &(t, u)) in grid.iter().enumerate() {
        for (ci, form) in forms.iter().enumerate() {
            let (n, p, v) = obs[ci][gi];
            if form.eval(n, p) != Some(v) {
                residuals.push((t, u, ci));
            }
        }
    }
    Ok(AffineReport { entry: s, forms, residuals })
}

/// Solve value = A·N + C·p + D exactly from the observations.
fn fit_affine(rows: &[(i128, i128, i128)]) -> Result<AffineForm> {
    // find three rows with an invertible system
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            for k in j + 1..rows.len() {
                let m = [rows[i], rows[j], rows[k]];
                let det = det3(
                    [m[0].0, m[0].1, 1],
                    [m[1].0, m[1].1, 1],
                    [m[2].0, m[2].1, 1],
                );
                if det == 0 {
                    continue;
                }
                let a_num = det3(
                    [m[0].2, m[0].1, 1],
                    [m[1].2, m[1].1, 1],
                    [m[2].2, m[2].1, 1],
                );
                let c_num = det3(
                    [m[0].0, m[0].2, 1],
                    [m[1].0, m[1].2, 1],
                    [m[2].0, m[2].2, 1],
                );
                let d_num = det3(
                    [m[0].0, m[0].1, m[0].2],
                    [m[1].0, m[1].1, m[1].2],
                    [m[2].0, m[2].1, m[2].2],
                );
                let (mut a_num, mut c_num, mut d_num, mut den) = (a_num, c_num, d_num, det);
                if den < 0 {
                    a_num = -a_num;
                    c_num = -c_num;
                    d_num = -d_num;
                    den = -den;
                }
                let g = gcd4(a_num.unsigned_abs(), c_num.unsigned_abs(), d_num.unsigned_abs(), den as u128)
                    .max(1) as i128;
                return Ok(AffineForm {
                    a_num: a_num / g,
                    c_num: c_num / g,
                    d_num: d_num / g,
                    den: den / g,
                });
            }
        }
    }
    Err(Error::Domain("affine fit: all samples collinear".into()))
}

fn det3(r0: [i128; 3], r1: [i128; 3], r2: [i128; 3]) -> i128 {
    r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
}

fn gcd4(a: u128, b: u128, c: u128, d: u128) -> u128 {
    fn g(a: u128, b: u128) -> u128 {
        if b == 0 {
            a
        } else {
            g(b, a % b)
        }
    }
    g(g(a, b), g(c, d))
}

fn div_floor(a: i128, b: i128) -> i128 {
    a.div_euclid(b)
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -((-a).div_euclid(b))
}
