//! Built-in fixtures with their expected classification.

use std::fmt;
use std::str::FromStr;

use crate::algebra::StratifiedAlgebra;
use crate::exactlin::{int, zero_vec};
use crate::structure::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    /// `ℝⁿ`, one layer, `n ≥ 3`.
    Abelian(usize),
    /// Layers `[2n, 1]` with `[Xᵢ, Yᵢ] = Z`.
    Heisenberg(usize),
    /// Layers `[4, 3]`, first layer `ℍ` with basis `1, i, j, k`, second
    /// layer `Im ℍ` with basis `i, j, k`, and `[x, y] = x̄y − ȳx`.
    QuaternionicHeisenberg,
    /// Free nilpotent on `m` generators; only step 2 is supported.
    FreeNilpotent(usize, usize),
    /// Layers `[2, 1, 1]` with `[X₁, X₂] = X₃`, `[X₁, X₃] = X₄`.
    Engel,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown fixture {0:?}; try `catalog list`")]
    UnknownName(String),
    #[error("invalid parameters for {name}: {reason}")]
    InvalidParameters { name: String, reason: String },
}

fn invalid(name: &str, reason: &str) -> CatalogError {
    CatalogError::InvalidParameters {
        name: name.to_string(),
        reason: reason.to_string(),
    }
}

impl Fixture {
    pub fn abelian(n: usize) -> Result<Self, CatalogError> {
        if n < 3 {
            return Err(invalid("abelian", "n must be at least 3"));
        }
        Ok(Fixture::Abelian(n))
    }

    pub fn heisenberg(n: usize) -> Result<Self, CatalogError> {
        if n < 1 {
            return Err(invalid("heisenberg", "n must be at least 1"));
        }
        Ok(Fixture::Heisenberg(n))
    }

    pub fn free_nilpotent(m: usize, step: usize) -> Result<Self, CatalogError> {
        if m < 2 {
            return Err(invalid("free_nilpotent", "need at least 2 generators"));
        }
        if step != 2 {
            return Err(invalid("free_nilpotent", "only step 2 is supported"));
        }
        Ok(Fixture::FreeNilpotent(m, step))
    }

    pub fn build(&self) -> StratifiedAlgebra {
        match *self {
            Fixture::Abelian(n) => StratifiedAlgebra::with_layers(vec![n]),
            Fixture::Heisenberg(n) => {
                // X_i = (1,i), Y_i = (1,n+i), Z = (2,1)
                let mut g = StratifiedAlgebra::with_layers(vec![2 * n, 1]);
                let mut z = zero_vec(2 * n + 1);
                z[2 * n] = int(1);
                for i in 0..n {
                    g.set_bracket(i, n + i, &z);
                }
                g
            }
            Fixture::QuaternionicHeisenberg => quaternionic_heisenberg(),
            Fixture::FreeNilpotent(m, _) => {
                let pairs = m * (m - 1) / 2;
                let mut g = StratifiedAlgebra::with_layers(vec![m, pairs]);
                let mut k = 0;
                for i in 0..m {
                    for j in i + 1..m {
                        let mut v = zero_vec(m + pairs);
                        v[m + k] = int(1);
                        g.set_bracket(i, j, &v);
                        k += 1;
                    }
                }
                g
            }
            Fixture::Engel => {
                let mut g = StratifiedAlgebra::with_layers(vec![2, 1, 1]);
                let mut x3 = zero_vec(4);
                x3[2] = int(1);
                let mut x4 = zero_vec(4);
                x4[3] = int(1);
                g.set_bracket(0, 1, &x3);
                g.set_bracket(0, 2, &x4);
                g
            }
        }
    }

    /// Verdict predicted by the rigidity dichotomy.
    pub fn expected(&self) -> Verdict {
        match self {
            Fixture::Abelian(_) | Fixture::Heisenberg(_) | Fixture::QuaternionicHeisenberg => {
                Verdict::Iwasawa
            }
            // two generators give the Heisenberg algebra
            Fixture::FreeNilpotent(2, _) => Verdict::Iwasawa,
            Fixture::FreeNilpotent(..) | Fixture::Engel => Verdict::Rigid,
        }
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fixture::Abelian(n) => write!(f, "abelian({n})"),
            Fixture::Heisenberg(n) => write!(f, "heisenberg({n})"),
            Fixture::QuaternionicHeisenberg => write!(f, "quaternionic_heisenberg"),
            Fixture::FreeNilpotent(m, s) => write!(f, "free_nilpotent({m},{s})"),
            Fixture::Engel => write!(f, "engel"),
        }
    }
}

impl FromStr for Fixture {
    type Err = CatalogError;

    /// Accepts `name` or `name(p, q, …)`.
    fn from_str(s: &str) -> Result<Self, CatalogError> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(open) => {
                let inner = s[open + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| CatalogError::UnknownName(s.to_string()))?;
                let args = inner
                    .split(',')
                    .map(|a| a.trim().parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| invalid(&s[..open], "parameters must be nonnegative integers"))?;
                (&s[..open], args)
            }
            None => (s, Vec::new()),
        };
        let arity = |k: usize| -> Result<(), CatalogError> {
            if args.len() == k {
                Ok(())
            } else {
                Err(invalid(
                    name,
                    &format!("expected {k} parameter(s), got {}", args.len()),
                ))
            }
        };
        match name {
            "abelian" => arity(1).and_then(|_| Fixture::abelian(args[0])),
            "heisenberg" => arity(1).and_then(|_| Fixture::heisenberg(args[0])),
            "free_nilpotent" => arity(2).and_then(|_| Fixture::free_nilpotent(args[0], args[1])),
            "quaternionic_heisenberg" => arity(0).map(|_| Fixture::QuaternionicHeisenberg),
            "engel" => arity(0).map(|_| Fixture::Engel),
            _ => Err(CatalogError::UnknownName(s.to_string())),
        }
    }
}

/// `e_a e_b = sign · e_c` for the quaternion units `1, i, j, k`.
fn quaternion_product(a: usize, b: usize) -> (i64, usize) {
    const TABLE: [[(i64, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    TABLE[a][b]
}

fn quaternionic_heisenberg() -> StratifiedAlgebra {
    let mut g = StratifiedAlgebra::with_layers(vec![4, 3]);
    for a in 0..4 {
        for b in a + 1..4 {
            // x̄y − ȳx = 2 Im(x̄y); conj(e_a) = ±e_a
            let conj = if a == 0 { 1 } else { -1 };
            let (s, c) = quaternion_product(a, b);
            let mut v = zero_vec(7);
            if c != 0 {
                v[4 + c - 1] = int(2 * conj * s);
            }
            g.set_bracket(a, b, &v);
        }
    }
    g
}

/// The default fixture list.
pub fn catalog() -> Vec<Fixture> {
    vec![
        Fixture::Abelian(3),
        Fixture::Abelian(4),
        Fixture::Heisenberg(1),
        Fixture::Heisenberg(2),
        Fixture::QuaternionicHeisenberg,
        Fixture::FreeNilpotent(3, 2),
        Fixture::Engel,
    ]
}
