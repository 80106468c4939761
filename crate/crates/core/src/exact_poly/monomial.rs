//! Exponent vectors and monomial orders.

use std::cmp::Ordering;

use smallvec::SmallVec;

/// An exponent vector in `N^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u32; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(exps: &[u32]) -> Monomial {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Monomial {
        let mut m = Monomial::one(nvars);
        m.0[i] = e;
        m
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        other.divides(self).then(|| self.div(other))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    pub(crate) fn exponents_mut(&mut self) -> &mut [u32] {
        &mut self.0
    }
}

/// A monomial order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    DegLex,
    #[default]
    DegRevLex,
    /// Total degree in the variables of the bit mask first, then degrevlex.
    /// Eliminates the masked variables.
    Elimination(u64),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::DegLex => a.degree().cmp(&b.degree()).then_with(|| a.0.cmp(&b.0)),
            MonomialOrder::DegRevLex => degrevlex(a, b),
            MonomialOrder::Elimination(mask) => {
                let w = |m: &Monomial| -> u32 {
                    m.0.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, e)| *e)
                        .sum()
                };
                w(a).cmp(&w(b)).then_with(|| degrevlex(a, b))
            }
        }
    }
}

fn degrevlex(a: &Monomial, b: &Monomial) -> Ordering {
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {
            for (x, y) in a.0.iter().rev().zip(b.0.iter().rev()) {
                if x != y {
                    return y.cmp(x);
                }
            }
            Ordering::Equal
        }
        o => o,
    }
}

/// All exponent vectors of length `nvars` with total degree at most `max_deg`,
/// supported on `support` (all variables when `None`), in graded order.
pub fn multi_indices(nvars: usize, max_deg: u32, support: Option<&[usize]>) -> Vec<Monomial> {
    let vars: Vec<usize> = match support {
        Some(s) => s.to_vec(),
        None => (0..nvars).collect(),
    };
    let mut out = Vec::new();
    for d in 0..=max_deg {
        let mut cur = Monomial::one(nvars);
        fill(&vars, 0, d, &mut cur, &mut out);
    }
    out
}

fn fill(vars: &[usize], k: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
    if k == vars.len() {
        if left == 0 {
            out.push(cur.clone());
        }
        return;
    }
    if k + 1 == vars.len() {
        cur.0[vars[k]] = left;
        out.push(cur.clone());
        cur.0[vars[k]] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur.0[vars[k]] = e;
        fill(vars, k + 1, left - e, cur, out);
    }
    cur.0[vars[k]] = 0;
}
