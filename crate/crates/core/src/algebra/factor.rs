use num_traits::Zero;

use super::poly::Poly;
use super::rational::{divisors, Q};
use super::AlgebraError;

/// Squarefree decomposition by Yun's algorithm.
///
/// Returns monic, pairwise coprime, squarefree factors `g_i` with
/// multiplicities `m_i` such that `p = lc(p) * prod g_i^m_i`. A constant
/// input yields an empty list.
pub fn squarefree_factorize(p: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let f = p.monic();
    let df = f.derivative();
    let a0 = Poly::gcd(&f, &df);
    let mut b = f.exact_div(&a0);
    let c = df.exact_div(&a0);
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = Poly::gcd(&b, &d);
        let nb = b.exact_div(&a);
        let nc = d.exact_div(&a);
        d = &nc - &nb.derivative();
        b = nb;
        if !a.is_constant() {
            out.push((a.monic(), i));
        }
        i += 1;
    }
    out
}

/// Rational roots of a polynomial with multiplicities, plus the cofactor
/// `p / prod (x - root)^mult`, which has no rational root.
#[derive(Debug, Clone, PartialEq)]
pub struct RootData {
    pub roots: Vec<(Q, usize)>,
    pub cofactor: Poly,
}

/// Rational roots of a squarefree polynomial, by the rational root theorem.
fn squarefree_rational_roots(g: &Poly) -> Result<Vec<Q>, AlgebraError> {
    let mut roots = Vec::new();
    let mut g = g.clone();
    if g.coeff(0).is_zero() {
        roots.push(Q::zero());
        g = g.exact_div(&Poly::x());
    }
    if g.is_constant() {
        return Ok(roots);
    }
    let (_, ints) = g.primitive_integer();
    let a0 = ints.first().cloned().unwrap_or_default();
    let an = ints.last().cloned().unwrap_or_default();
    let num_divs = divisors(&a0)?;
    let den_divs = divisors(&an)?;
    let deg = g.degree().unwrap_or(0);
    let found_before = roots.len();
    let mut cands: Vec<Q> = Vec::new();
    for p in &num_divs {
        for qd in &den_divs {
            let c = Q::new(p.clone(), qd.clone());
            cands.push(c.clone());
            cands.push(-c);
        }
    }
    cands.sort();
    cands.dedup();
    for c in cands {
        if roots.len() - found_before == deg {
            break;
        }
        if g.eval(&c).is_zero() {
            roots.push(c);
        }
    }
    Ok(roots)
}

pub fn rational_roots(p: &Poly) -> Result<RootData, AlgebraError> {
    assert!(!p.is_zero(), "rational_roots of the zero polynomial");
    let mut roots = Vec::new();
    let mut cofactor = p.clone();
    for (g, m) in squarefree_factorize(p) {
        for r in squarefree_rational_roots(&g)? {
            let lin = Poly::linear_root(&r).pow(m as u32);
            cofactor = cofactor.exact_div(&lin);
            roots.push((r, m));
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(RootData { roots, cofactor })
}
