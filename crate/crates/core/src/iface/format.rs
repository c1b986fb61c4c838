//! The algebra file format.
//!
//! ```json
//! {
//!   "name": "heisenberg(1)",
//!   "layers": [2, 1],
//!   "brackets": [
//!     { "left": [1, 1], "right": [1, 2], "value": [{ "basis": [2, 1], "coeff": "1/1" }] }
//!   ]
//! }
//! ```
//!
//! Basis labels are `[j, i]`: the `i`-th vector of layer `j`, both 1-based.
//! Omitted pairs bracket to zero. A pair given in one order only is extended
//! by antisymmetry; a pair given in both orders is stored exactly as written,
//! so an inconsistent pair is reported by validation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::StratifiedAlgebra;
use crate::exactlin::{format_rational, parse_rational, zero_vec, Rational};
use crate::lie::StructureConstants;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub layers: Vec<usize>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub left: [usize; 2],
    pub right: [usize; 2],
    pub value: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub basis: [usize; 2],
    pub coeff: String,
}

/// A malformed file, with the place where reading stopped.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{location}: {message}")]
pub struct FormatError {
    /// `line L, column C` for syntax errors, a JSON path otherwise.
    pub location: String,
    pub message: String,
}

impl FormatError {
    fn at(location: impl Into<String>, message: impl Into<String>) -> Self {
        FormatError {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl AlgebraFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        serde_json::from_str(text)
            .map_err(|e| FormatError::at(format!("line {}, column {}", e.line(), e.column()), e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    /// Builds the algebra. Structural checks are left to validation; only
    /// problems that prevent building a table are errors here.
    pub fn to_algebra(&self) -> Result<StratifiedAlgebra, FormatError> {
        if let Some(j) = self.layers.iter().position(|&d| d == 0) {
            return Err(FormatError::at(
                format!("layers[{j}]"),
                "layer dimensions must be positive",
            ));
        }
        let mut offsets = vec![0];
        for d in &self.layers {
            offsets.push(offsets.last().unwrap() + d);
        }
        let n = *offsets.last().unwrap();
        let index = |label: [usize; 2], loc: String| -> Result<usize, FormatError> {
            let [j, i] = label;
            if j == 0 || j > self.layers.len() || i == 0 || i > self.layers[j - 1] {
                return Err(FormatError::at(
                    loc,
                    format!("basis label [{j}, {i}] is outside the layers"),
                ));
            }
            Ok(offsets[j - 1] + i - 1)
        };

        let mut given: BTreeMap<(usize, usize), Vec<Rational>> = BTreeMap::new();
        for (e, entry) in self.brackets.iter().enumerate() {
            let a = index(entry.left, format!("brackets[{e}].left"))?;
            let b = index(entry.right, format!("brackets[{e}].right"))?;
            let mut v = zero_vec(n);
            for (t, term) in entry.value.iter().enumerate() {
                let c = index(term.basis, format!("brackets[{e}].value[{t}].basis"))?;
                let x = parse_rational(&term.coeff).map_err(|err| {
                    FormatError::at(format!("brackets[{e}].value[{t}].coeff"), err.to_string())
                })?;
                v[c] += x;
            }
            if given.insert((a, b), v).is_some() {
                return Err(FormatError::at(
                    format!("brackets[{e}]"),
                    format!("pair [{:?}, {:?}] is given twice", entry.left, entry.right),
                ));
            }
        }

        let mut table = StructureConstants::zero(n);
        for (&(a, b), v) in &given {
            table.set(a, b, v);
            if a != b && !given.contains_key(&(b, a)) {
                let neg: Vec<Rational> = v.iter().map(|x| -x).collect();
                table.set(b, a, &neg);
            }
        }
        Ok(StratifiedAlgebra::from_table(self.layers.clone(), table))
    }

    /// One entry per nonzero `[e_a, e_b]` with `a < b`, plus any entry that
    /// breaks antisymmetry, so that the file reproduces the table exactly.
    pub fn from_algebra(name: &str, alg: &StratifiedAlgebra) -> Self {
        let t = alg.table();
        let n = alg.dim();
        let label = |x: usize| {
            let (j, i) = alg.label(x);
            [j, i]
        };
        let mut brackets = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let v = t.basis_bracket(a, b);
                let w = t.basis_bracket(b, a);
                let antisymmetric = v.iter().zip(&w).all(|(x, y)| num_traits::Zero::is_zero(&(x + y)));
                let emit = if a < b {
                    t.is_set(a, b) || !antisymmetric
                } else {
                    !antisymmetric && t.is_set(a, b)
                };
                if !emit {
                    continue;
                }
                let value = t
                    .sparse(a, b)
                    .iter()
                    .map(|(c, x)| Term {
                        basis: label(*c),
                        coeff: format_rational(x),
                    })
                    .collect();
                brackets.push(BracketEntry {
                    left: label(a),
                    right: label(b),
                    value,
                });
            }
        }
        AlgebraFile {
            name: name.to_string(),
            layers: alg.layer_dims().to_vec(),
            brackets,
        }
    }
}
