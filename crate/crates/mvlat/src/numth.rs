//! Exact integer utilities: symmetric residues, continued fractions,
//! continuants and the planar (2D) Voronoi minima used by the lattice
//! theory.
//!
//! Everything here is checked 64-bit arithmetic; an overflow is reported
//! as an error rather than wrapped.

use crate::{Error, Result};

/// Greatest common divisor of two nonnegative integers.
pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Symmetric residue |a|_N = min(a mod N, -a mod N).
///
/// The result lies in [0, N/2].
pub fn sym_mod(a: i64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("sym_mod: modulus must be positive".into()));
    }
    let r = a.rem_euclid(n as i64) as u64;
    Ok(r.min(n - r))
}

/// Symmetric residue for operands already known nonnegative, with a wide
/// intermediate so products like b'·k never overflow.
pub fn sym_mod_u128(a: u128, n: u64) -> u64 {
    let r = (a % n as u128) as u64;
    r.min(n - r)
}

/// A regular continued fraction [a0; a1, ..., as] in shortest form:
/// the last partial quotient is >= 2 whenever there is more than one term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    terms: Vec<u64>,
}

impl ContinuedFraction {
    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluate back to (p, q) via continuants.
    pub fn eval(&self) -> Result<(u64, u64)> {
        let xs: Vec<i64> = self.terms.iter().map(|&t| t as i64).collect();
        let p = continuant(&xs)?;
        let q = continuant(&xs[1..])?;
        Ok((p as u64, q as u64))
    }

    /// The equal-valued expansion of the other parity:
    /// [.., a] <-> [.., a-1, 1]. Only used to cross-check shortest form.
    pub fn alternate(&self) -> ContinuedFraction {
        let mut t = self.terms.clone();
        match t.last() {
            Some(&last) if t.len() > 1 || last > 1 => {
                if last == 1 && t.len() > 1 {
                    t.pop();
                    *t.last_mut().unwrap() += 1;
                } else {
                    *t.last_mut().unwrap() -= 1;
                    t.push(1);
                }
            }
            _ => {}
        }
        ContinuedFraction { terms: t }
    }
}

impl std::fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}", self.terms.first().copied().unwrap_or(0))?;
        if self.terms.len() > 1 {
            write!(f, ";")?;
            for (i, t) in self.terms[1..].iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{t}")?;
            }
        }
        write!(f, "]")
    }
}

/// Euclidean expansion of p/q in shortest form.
pub fn cf_expand(p: u64, q: u64) -> Result<ContinuedFraction> {
    if q == 0 {
        return Err(Error::Domain("cf_expand: denominator must be positive".into()));
    }
    let (mut p, mut q) = (p, q);
    let mut terms = Vec::new();
    loop {
        terms.push(p / q);
        let r = p % q;
        if r == 0 {
            break;
        }
        p = q;
        q = r;
    }
    Ok(ContinuedFraction { terms })
}

/// Continuant K(x1, ..., xn) by the standard recurrence.
///
/// K() = 1 and the window of length -1 counts as 0, which makes the planar
/// minima formula total at both ends.
pub fn continuant(xs: &[i64]) -> Result<i64> {
    let mut prev: i64 = 0; // K over window of length -1
    let mut cur: i64 = 1; // K()
    for &x in xs {
        let next = x
            .checked_mul(cur)
            .and_then(|m| m.checked_add(prev))
            .ok_or(Error::Overflow("continuant"))?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// The 2D Voronoi minima of the lattice spanned by (N,0) and (1,b),
/// returned as absolute-value pairs γ0, ..., γ_{s+1}.
///
/// γ_j = (K_{j-1}(a1..a_{j-1}), K_{s-j}(a_{j+1}..a_s)) for b/N = [0; a1..a_s],
/// so γ0 = (0,N), γ1 = (1,b) and γ_{s+1} = (N,0).
pub fn planar_minima_2d(b: u64, n: u64) -> Result<Vec<(u64, u64)>> {
    // the enumeration needs a1 >= 2, i.e. b <= N/2
    if b == 0 || 2 * b > n {
        return Err(Error::Domain(format!(
            "planar_minima_2d: need 1 <= b <= N/2, got b={b}, N={n}"
        )));
    }
    if gcd(b, n) != 1 {
        return Err(Error::Domain(format!(
            "planar_minima_2d: gcd(b,N) = {} != 1",
            gcd(b, n)
        )));
    }
    let cf = cf_expand(b, n)?;
    debug_assert_eq!(cf.terms()[0], 0);
    let a: Vec<i64> = cf.terms()[1..].iter().map(|&t| t as i64).collect();
    let s = a.len();
    let mut out = Vec::with_capacity(s + 2);
    for j in 0..=s + 1 {
        // K_{j-1}(a_1..a_{j-1}) and K_{s-j}(a_{j+1}..a_s), windows of
        // negative length counting as 0
        let x = if j == 0 { 0 } else { continuant(&a[..j - 1])? };
        let y = if j == s + 1 { 0 } else { continuant(&a[j..])? };
        out.push((x as u64, y as u64));
    }
    Ok(out)
}

/// b' with |b·b'|_N = 1, computed as the continuant over all but the last
/// partial quotient of N/b.
pub fn modular_companion(b: u64, n: u64) -> Result<u64> {
    if b < 2 || b >= n || n % b == 0 {
        return Err(Error::Domain(format!(
            "modular_companion: need 2 <= b < N with b not dividing N, got b={b}, N={n}"
        )));
    }
    if gcd(b, n) != 1 {
        return Err(Error::Domain("modular_companion: gcd(b,N) != 1".into()));
    }
    let cf = cf_expand(n, b)?;
    let terms: Vec<i64> = cf.terms().iter().map(|&t| t as i64).collect();
    let k = continuant(&terms[..terms.len() - 1])?;
    Ok(k.rem_euclid(n as i64) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym_mod_examples() {
        assert_eq!(sym_mod(4, 7).unwrap(), 3); // min(4, 3)
        assert_eq!(sym_mod(6, 7).unwrap(), 1); // min(6, 1)
        assert_eq!(sym_mod(5, 10).unwrap(), 5); // boundary N/2
        assert!(sym_mod(3, 0).is_err());
    }

    #[test]
    fn sym_mod_symmetry() {
        // |a|_N = |-a|_N = |a+N|_N over a deterministic sample
        for n in 1..60u64 {
            for a in -130..130i64 {
                let v = sym_mod(a, n).unwrap();
                assert_eq!(v, sym_mod(-a, n).unwrap());
                assert_eq!(v, sym_mod(a + n as i64, n).unwrap());
                assert!(v <= n / 2);
            }
        }
    }

    #[test]
    fn cf_examples() {
        assert_eq!(cf_expand(5, 2).unwrap().terms(), &[2, 2]);
        assert_eq!(cf_expand(121, 26).unwrap().terms(), &[4, 1, 1, 1, 8]);
        assert_eq!(cf_expand(5, 1).unwrap().terms(), &[5]);
        assert!(cf_expand(5, 0).is_err());
    }

    #[test]
    fn cf_shortest_form_and_roundtrip() {
        for q in 1..80u64 {
            for p in 1..80u64 {
                if gcd(p, q) != 1 {
                    continue;
                }
                let cf = cf_expand(p, q).unwrap();
                if cf.len() > 1 {
                    assert!(*cf.terms().last().unwrap() >= 2, "{p}/{q} -> {cf}");
                }
                assert_eq!(cf.eval().unwrap(), (p, q));
                // the other expansion of the same rational is one term off
                let alt = cf.alternate();
                assert_eq!(alt.eval().unwrap(), (p, q));
                if cf.len() > 1 || cf.terms()[0] > 1 {
                    assert_eq!(alt.len(), cf.len() + 1);
                }
            }
        }
    }

    #[test]
    fn continuant_examples() {
        assert_eq!(continuant(&[]).unwrap(), 1); // K0() = 1
        assert_eq!(continuant(&[7]).unwrap(), 7); // K1(x) = x
        assert_eq!(continuant(&[2, 2]).unwrap(), 5); // 2*2 + 1
        assert!(continuant(&[i64::MAX, 2]).is_err());
    }

    #[test]
    fn planar_minima_examples() {
        assert_eq!(
            planar_minima_2d(2, 5).unwrap(),
            vec![(0, 5), (1, 2), (2, 1), (5, 0)]
        );
        assert_eq!(planar_minima_2d(1, 4).unwrap(), vec![(0, 4), (1, 1), (4, 0)]);
        assert_eq!(planar_minima_2d(1, 2).unwrap(), vec![(0, 2), (1, 1), (2, 0)]);
        assert!(planar_minima_2d(2, 6).is_err());
    }

    #[test]
    fn planar_minima_monotone_and_determinant() {
        for n in 3..160u64 {
            for b in 1..=n / 2 {
                if gcd(b, n) != 1 {
                    continue;
                }
                let g = planar_minima_2d(b, n).unwrap();
                assert_eq!(g[0], (0, n));
                assert_eq!(g[1], (1, b));
                assert_eq!(*g.last().unwrap(), (n, 0));
                for w in g.windows(2) {
                    assert!(w[0].0 < w[1].0, "x strictly increasing: {g:?}");
                    assert!(w[0].1 > w[1].1, "y strictly decreasing: {g:?}");
                }
                // |b * K_s(a0..a_{s-1})| = 1 (mod N) for N/b = [a0; a1..as]
                let cf = cf_expand(n, b).unwrap();
                let terms: Vec<i64> = cf.terms().iter().map(|&t| t as i64).collect();
                let k = continuant(&terms[..terms.len() - 1]).unwrap();
                assert_eq!(sym_mod_u128(b as u128 * k.unsigned_abs() as u128, n), 1);
            }
        }
    }

    #[test]
    fn modular_companion_inverts() {
        for n in 5..140u64 {
            for b in 2..n {
                if n % b == 0 || gcd(b, n) != 1 {
                    continue;
                }
                let bp = modular_companion(b, n).unwrap();
                assert_eq!(sym_mod_u128(b as u128 * bp as u128, n), 1);
            }
        }
    }
}
