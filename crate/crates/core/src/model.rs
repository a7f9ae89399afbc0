//! Finite symplectic models: the cdga of invariant forms on a nilmanifold
//! (or torus) presented by structure constants.
//!
//! A [`LieModel`] fixes generators `e_1..e_{2n}`, the value of the
//! differential on each generator, and an invariant symplectic form. The
//! differential extends as a degree-one derivation. On such a model every
//! operator in this crate is an exact matrix, and for nilmanifolds the
//! invariant complex computes the full de Rham cohomology.

use std::collections::BTreeMap;
use std::fmt;

use crate::exterior::{Form, MultiIndex};
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieModel {
    name: String,
    /// Half-dimension; the model has generators `1..=2n`.
    n: usize,
    /// `d e_i` for each generator with a nonzero differential.
    structure: BTreeMap<u8, Form>,
    omega: Form,
}

impl LieModel {
    pub fn new(name: impl Into<String>, n: usize, structure: BTreeMap<u8, Form>, omega: Form) -> Self {
        LieModel {
            name: name.into(),
            n,
            structure,
            omega,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn half_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    pub fn structure(&self) -> &BTreeMap<u8, Form> {
        &self.structure
    }

    /// Replaces the symplectic form, keeping the underlying algebra. Used
    /// for gauge-equivalence targets where `omega' = omega + d(eta)`.
    pub fn with_omega(&self, name: impl Into<String>, omega: Form) -> LieModel {
        LieModel {
            name: name.into(),
            n: self.n,
            structure: self.structure.clone(),
            omega,
        }
    }

    pub fn d_generator(&self, label: u8) -> Form {
        self.structure.get(&label).cloned().unwrap_or_else(Form::zero)
    }

    /// The de Rham differential, extended from the structure constants as a
    /// derivation: `d(x ∧ y) = dx ∧ y + (-1)^{|x|} x ∧ dy`.
    pub fn d(&self, a: &Form) -> Form {
        let mut out = Form::zero();
        for (ix, c) in a.terms() {
            let labels = ix.labels();
            for (pos, &label) in labels.iter().enumerate() {
                let dgen = match self.structure.get(&label) {
                    Some(f) => f,
                    None => continue,
                };
                let prefix = Form::monomial(
                    MultiIndex::new(labels[..pos].to_vec()).expect("prefix is increasing"),
                    scalar::one(),
                );
                let suffix = Form::monomial(
                    MultiIndex::new(labels[pos + 1..].to_vec()).expect("suffix is increasing"),
                    scalar::one(),
                );
                let mut term = prefix.wedge(dgen).wedge(&suffix);
                if pos % 2 == 1 {
                    term = -&term;
                }
                out = &out + &term.scaled(c);
            }
        }
        out
    }

    /// Integration against the unit-covolume orientation: the coefficient
    /// of the top monomial `e_{1..2n}`. Lower-degree input integrates to 0.
    pub fn integrate(&self, a: &Form) -> Scalar {
        let top = MultiIndex::new((1..=self.dim() as u8).collect()).expect("top index");
        a.coeff(&top)
    }

    /// Checks the model invariants, reporting every failure with the
    /// offending generator or term. Never aborts.
    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();
        let dim = self.dim() as u8;

        let mut shape_failures = Vec::new();
        for (label, value) in &self.structure {
            if *label == 0 || *label > dim {
                shape_failures.push(format!("d is given on e{label}, outside 1..={dim}"));
            }
            if value.degree() != Some(2) && !value.is_zero() {
                shape_failures.push(format!("d e{label} = {value} is not homogeneous of degree 2"));
            }
            if value.max_label() > dim {
                shape_failures.push(format!("d e{label} = {value} uses generators beyond e{dim}"));
            }
        }
        if self.omega.max_label() > dim {
            shape_failures.push(format!("omega uses generators beyond e{dim}"));
        }
        if !self.omega.is_zero() && self.omega.degree() != Some(2) {
            shape_failures.push("omega is not homogeneous of degree 2".to_string());
        }
        checks.push(ValidationCheck::new("generator shape", shape_failures));

        let mut d2_failures = Vec::new();
        for label in 1..=dim {
            let dd = self.d(&self.d_generator(label));
            if !dd.is_zero() {
                d2_failures.push(format!("d(d e{label}) = {dd}"));
            }
        }
        checks.push(ValidationCheck::new("d^2 = 0 (Jacobi)", d2_failures));

        let domega = self.d(&self.omega);
        let domega_failures = if domega.is_zero() {
            Vec::new()
        } else {
            vec![format!("d(omega) = {domega}")]
        };
        checks.push(ValidationCheck::new("d(omega) = 0", domega_failures));

        let top = self.omega.wedge_pow(self.n);
        let nondeg_failures = if top.is_zero() {
            vec![format!("omega^{} = 0", self.n)]
        } else {
            Vec::new()
        };
        checks.push(ValidationCheck::new("omega^n != 0 (nondegeneracy)", nondeg_failures));

        ValidationReport {
            model: self.name.clone(),
            checks,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ValidationCheck {
    pub name: String,
    pub failures: Vec<String>,
}

impl ValidationCheck {
    fn new(name: &str, failures: Vec<String>) -> Self {
        ValidationCheck {
            name: name.to_string(),
            failures,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub model: String,
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn failure_summary(&self) -> String {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| format!("{} ({})", c.name, c.failures.join("; ")))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model {}:", self.model)?;
        for check in &self.checks {
            if check.passed() {
                writeln!(f, "  pass  {}", check.name)?;
            } else {
                writeln!(f, "  FAIL  {}: {}", check.name, check.failures.join("; "))?;
            }
        }
        Ok(())
    }
}

fn darboux_omega(n: usize) -> Form {
    let mut omega = Form::zero();
    for i in 0..n {
        let a = Form::generator((2 * i + 1) as u8);
        let b = Form::generator((2 * i + 2) as u8);
        omega = &omega + &a.wedge(&b);
    }
    omega
}

/// The Kodaira-Thurston nilmanifold: `d e4 = e23`, `omega = e12 + e34`.
/// The standard closed symplectic non-Kahler four-manifold.
pub fn kt4() -> LieModel {
    let mut structure = BTreeMap::new();
    structure.insert(4u8, Form::generator(2).wedge(&Form::generator(3)));
    LieModel::new("kt4", 2, structure, darboux_omega(2))
}

/// Flat 4-torus with the standard Darboux form.
pub fn t4() -> LieModel {
    LieModel::new("t4", 2, BTreeMap::new(), darboux_omega(2))
}

/// Flat 6-torus with the standard Darboux form.
pub fn t6() -> LieModel {
    LieModel::new("t6", 3, BTreeMap::new(), darboux_omega(3))
}

/// Iwasawa-type six-dimensional nilmanifold: `d e5 = e13 - e24`,
/// `d e6 = e14 + e23`, `omega = e16 + e25 + e34`. Unlike the other
/// builtins its second-order middle differential is nonzero, which makes
/// it the model of choice for mutation sensitivity.
pub fn iw6() -> LieModel {
    let e = Form::generator;
    let mut structure = BTreeMap::new();
    structure.insert(5u8, &e(1).wedge(&e(3)) - &e(2).wedge(&e(4)));
    structure.insert(6u8, &e(1).wedge(&e(4)) + &e(2).wedge(&e(3)));
    let omega = &(&e(1).wedge(&e(6)) + &e(2).wedge(&e(5))) + &e(3).wedge(&e(4));
    LieModel::new("iw6", 3, structure, omega)
}

pub fn builtin_models() -> Vec<LieModel> {
    vec![kt4(), t4(), t6(), iw6()]
}

pub fn builtin(name: &str) -> Option<LieModel> {
    builtin_models().into_iter().find(|m| m.name() == name)
}
