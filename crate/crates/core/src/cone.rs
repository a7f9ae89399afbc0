//! The cone cdga: forms with a free odd generator theta killing a power
//! of the symplectic form.
//!
//! For an Euler form `zeta = omega^{p+1}` the algebra in degree `k` is
//! `Omega^k ⊕ theta · Omega^{k-2p-1}` with `d theta = zeta`; theta squares
//! to zero, which the pair representation makes automatic. Quotients to
//! the next filtration level, pullbacks along model morphisms, gauge
//! moves between cohomologous Euler forms, and the rescaling isomorphism
//! all live here, each verified basis-exhaustively by the functoriality
//! suites.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::traits::Zero;

use crate::error::Error;
use crate::exterior::{Form, MultiIndex};
use crate::linalg::Matrix;
use crate::model::LieModel;
use crate::report::{Counterexample, IdentityReport, IdentityResult};
use crate::scalar::{self, Scalar};

/// Element `eta + theta · xi` of the cone in one total degree.
#[derive(Debug, Clone)]
pub struct ConeElement {
    p: usize,
    degree: usize,
    eta: Form,
    xi: Form,
}

impl ConeElement {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eta(&self) -> &Form {
        &self.eta
    }

    pub fn xi(&self) -> &Form {
        &self.xi
    }

    pub fn is_zero(&self) -> bool {
        self.eta.is_zero() && self.xi.is_zero()
    }

    pub fn zero(p: usize, degree: usize) -> Self {
        ConeElement {
            p,
            degree,
            eta: Form::zero(),
            xi: Form::zero(),
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        ConeElement {
            p: self.p,
            degree: self.degree,
            eta: self.eta.scaled(c),
            xi: self.xi.scaled(c),
        }
    }

    pub fn neg(&self) -> Self {
        self.scaled(&scalar::int(-1))
    }

    pub fn add(&self, other: &ConeElement) -> ConeElement {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.p, other.p, "cone elements at different levels");
        assert_eq!(self.degree, other.degree, "cone elements of different degrees");
        ConeElement {
            p: self.p,
            degree: self.degree,
            eta: &self.eta + &other.eta,
            xi: &self.xi + &other.xi,
        }
    }

    pub fn sub(&self, other: &ConeElement) -> ConeElement {
        self.add(&other.neg())
    }
}

impl PartialEq for ConeElement {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() && other.is_zero() {
            return true;
        }
        self.p == other.p
            && self.degree == other.degree
            && self.eta == other.eta
            && self.xi == other.xi
    }
}

impl Eq for ConeElement {}

impl fmt::Display for ConeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.eta.is_zero(), self.xi.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.eta),
            (true, false) => write!(f, "θ({})", self.xi),
            (false, false) => write!(f, "{} + θ({})", self.eta, self.xi),
        }
    }
}

/// The cone cdga over a fixed model and level, with per-degree monomial
/// bases and differential matrices.
pub struct ConeAlgebra {
    model: Arc<LieModel>,
    p: usize,
    zeta: Form,
    /// per total degree: monomials of the eta slot, then of the xi slot
    bases: Vec<Vec<ConeElement>>,
    differentials: Vec<Matrix>,
}

impl ConeAlgebra {
    /// Cone over `omega^{p+1}`.
    pub fn new(model: Arc<LieModel>, p: usize) -> Result<Self, Error> {
        let n = model.half_dim();
        if p > n {
            return Err(Error::FiltrationOutOfRange { p, n });
        }
        let zeta = model.omega().wedge_pow(p + 1);
        Self::with_euler(model, p, zeta)
    }

    /// Cone over an arbitrary closed Euler form of degree `2p+2`; used for
    /// gauge-equivalence targets.
    pub fn with_euler(model: Arc<LieModel>, p: usize, zeta: Form) -> Result<Self, Error> {
        if !zeta.is_zero() && zeta.degree() != Some(2 * p + 2) {
            return Err(Error::Input(format!(
                "Euler form must have degree {}, got {}",
                2 * p + 2,
                zeta
            )));
        }
        if !model.d(&zeta).is_zero() {
            return Err(Error::Input(format!("Euler form {zeta} is not closed")));
        }
        let dim = model.dim();
        let top = 2 * model.half_dim() + 2 * p + 1;
        let theta_degree = 2 * p + 1;
        let mut bases = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let mut basis = Vec::new();
            if k <= dim {
                for ix in MultiIndex::all(dim, k) {
                    basis.push(ConeElement {
                        p,
                        degree: k,
                        eta: Form::monomial(ix, scalar::one()),
                        xi: Form::zero(),
                    });
                }
            }
            if k >= theta_degree && k - theta_degree <= dim {
                for ix in MultiIndex::all(dim, k - theta_degree) {
                    basis.push(ConeElement {
                        p,
                        degree: k,
                        eta: Form::zero(),
                        xi: Form::monomial(ix, scalar::one()),
                    });
                }
            }
            bases.push(basis);
        }
        let mut cone = ConeAlgebra {
            model,
            p,
            zeta,
            bases,
            differentials: Vec::new(),
        };
        for k in 0..=top {
            let target_len = if k < top { cone.bases[k + 1].len() } else { 0 };
            let columns: Vec<Vec<Scalar>> = cone.bases[k]
                .iter()
                .map(|x| {
                    let image = cone.d(x);
                    cone.coords(&image)
                })
                .collect();
            cone.differentials
                .push(Matrix::from_columns(target_len, &columns));
        }
        for k in 0..top {
            let square = cone.differentials[k + 1].mul_mat(&cone.differentials[k]);
            assert!(square.is_zero(), "cone differential fails d² = 0 at degree {k}");
        }
        Ok(cone)
    }

    pub fn model(&self) -> &Arc<LieModel> {
        &self.model
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn zeta(&self) -> &Form {
        &self.zeta
    }

    pub fn top_degree(&self) -> usize {
        2 * self.model.half_dim() + 2 * self.p + 1
    }

    pub fn theta_degree(&self) -> usize {
        2 * self.p + 1
    }

    pub fn basis(&self, k: usize) -> &[ConeElement] {
        static EMPTY: [ConeElement; 0] = [];
        self.bases.get(k).map(Vec::as_slice).unwrap_or(&EMPTY)
    }

    pub fn all_basis(&self) -> Vec<ConeElement> {
        self.bases.iter().flatten().cloned().collect()
    }

    pub fn differential_matrix(&self, k: usize) -> &Matrix {
        &self.differentials[k]
    }

    pub fn unit(&self) -> ConeElement {
        ConeElement {
            p: self.p,
            degree: 0,
            eta: Form::one(),
            xi: Form::zero(),
        }
    }

    /// Builds `eta + theta·xi`, checking degree coherence.
    pub fn element(&self, eta: Form, xi: Form) -> Result<ConeElement, Error> {
        let theta_deg = self.theta_degree();
        let degree = match (eta.degree(), xi.degree()) {
            (None, None) => 0,
            (Some(k), None) => k,
            (None, Some(kx)) => kx + theta_deg,
            (Some(k), Some(kx)) => {
                if kx + theta_deg != k {
                    return Err(Error::Input(format!(
                        "cone slots have incompatible degrees: |{eta}| = {k}, |{xi}| + {theta_deg} = {}",
                        kx + theta_deg
                    )));
                }
                k
            }
        };
        if eta.max_label() as usize > self.model.dim() || xi.max_label() as usize > self.model.dim()
        {
            return Err(Error::Input(
                "cone element uses generators beyond the model dimension".into(),
            ));
        }
        Ok(ConeElement {
            p: self.p,
            degree,
            eta,
            xi,
        })
    }

    /// Builds an element with an explicit total degree, allowing zero
    /// slots; nonzero slots must be degree-consistent.
    pub fn element_from_pair(&self, eta: Form, xi: Form, degree: usize) -> ConeElement {
        if let Some(k) = eta.degree() {
            assert_eq!(k, degree, "eta slot has the wrong degree");
        }
        if let Some(kx) = xi.degree() {
            assert_eq!(
                kx + self.theta_degree(),
                degree,
                "xi slot has the wrong degree"
            );
        }
        ConeElement {
            p: self.p,
            degree,
            eta,
            xi,
        }
    }

    /// `d(eta ⊕ theta·xi) = (d eta + zeta ∧ xi) ⊕ -theta·d xi`.
    pub fn d(&self, x: &ConeElement) -> ConeElement {
        let eta = &self.model.d(&x.eta) + &self.zeta.wedge(&x.xi);
        let xi = -&self.model.d(&x.xi);
        ConeElement {
            p: self.p,
            degree: x.degree + 1,
            eta,
            xi,
        }
    }

    /// Graded product; theta² = 0 comes for free from the slot layout:
    /// `(a + θa')(b + θb') = a∧b ⊕ θ(a'∧b + (-1)^{|a|} a∧b')`.
    pub fn m2(&self, x: &ConeElement, y: &ConeElement) -> ConeElement {
        let eta = x.eta.wedge(&y.eta);
        let mut xi = x.xi.wedge(&y.eta);
        let second = x.eta.wedge(&y.xi);
        xi = if x.degree % 2 == 0 {
            &xi + &second
        } else {
            &xi - &second
        };
        ConeElement {
            p: self.p,
            degree: x.degree + y.degree,
            eta,
            xi,
        }
    }

    /// Coordinates over the monomial basis at the element's degree.
    pub fn coords(&self, x: &ConeElement) -> Vec<Scalar> {
        let k = x.degree;
        if k >= self.bases.len() {
            assert!(x.is_zero(), "nonzero cone element beyond the top degree");
            return Vec::new();
        }
        let dim = self.model.dim();
        let theta_deg = self.theta_degree();
        let eta_monomials = if k <= dim {
            MultiIndex::all(dim, k)
        } else {
            Vec::new()
        };
        let xi_monomials = if k >= theta_deg && k - theta_deg <= dim {
            MultiIndex::all(dim, k - theta_deg)
        } else {
            Vec::new()
        };
        let mut out = Vec::with_capacity(eta_monomials.len() + xi_monomials.len());
        for ix in &eta_monomials {
            out.push(x.eta.coeff(ix));
        }
        for ix in &xi_monomials {
            out.push(x.xi.coeff(ix));
        }
        out
    }

    pub fn element_from_coords(&self, degree: usize, coords: &[Scalar]) -> ConeElement {
        let basis = self.basis(degree);
        assert_eq!(basis.len(), coords.len(), "coordinate length mismatch");
        let mut out = ConeElement::zero(self.p, degree);
        for (e, c) in basis.iter().zip(coords) {
            if !c.is_zero() {
                out = out.add(&e.scaled(c));
            }
        }
        out
    }

    /// Quotient to the previous level: `alpha ⊕ θβ -> alpha ⊕ θ(omega ∧ β)`.
    pub fn quotient(&self, x: &ConeElement) -> Result<ConeElement, Error> {
        if self.p == 0 {
            return Err(Error::Input(
                "quotient is only defined for levels p >= 1".into(),
            ));
        }
        Ok(ConeElement {
            p: self.p - 1,
            degree: x.degree,
            eta: x.eta.clone(),
            xi: self.model.omega().wedge(&x.xi),
        })
    }

    /// Gauge move to the cone over `zeta + d(eta_gauge)`:
    /// `alpha ⊕ θβ -> (alpha - eta_gauge ∧ β) ⊕ θ'β`. A cdga isomorphism
    /// with inverse given by `-eta_gauge`.
    pub fn gauge(
        &self,
        target: &ConeAlgebra,
        eta_gauge: &Form,
        x: &ConeElement,
    ) -> Result<ConeElement, Error> {
        // the two cones must share the underlying algebra; the symplectic
        // forms (hence Euler forms) are allowed to differ
        if self.model.dim() != target.model.dim()
            || self.model.structure() != target.model.structure()
        {
            return Err(Error::BadGauge(
                "source and target have different underlying algebras".into(),
            ));
        }
        if self.p != target.p {
            return Err(Error::BadGauge("source and target levels differ".into()));
        }
        if !eta_gauge.is_zero() && eta_gauge.degree() != Some(self.theta_degree()) {
            return Err(Error::BadGauge(format!(
                "gauge form must have degree {}, got {eta_gauge}",
                self.theta_degree()
            )));
        }
        let difference = &target.zeta - &self.zeta;
        if self.model.d(eta_gauge) != difference {
            return Err(Error::BadGauge(format!(
                "d({eta_gauge}) does not equal the Euler-form difference {difference}"
            )));
        }
        Ok(ConeElement {
            p: self.p,
            degree: x.degree,
            eta: &x.eta - &eta_gauge.wedge(&x.xi),
            xi: x.xi.clone(),
        })
    }

    /// The cone over `(k·omega)^{p+1}` on the same underlying algebra.
    pub fn scaled_omega_cone(&self, k: &Scalar) -> Result<ConeAlgebra, Error> {
        if k.is_zero() {
            return Err(Error::Input("scaling factor must be nonzero".into()));
        }
        let model = Arc::new(
            self.model
                .with_omega(format!("{}·scaled", self.model.name()), self.model.omega().scaled(k)),
        );
        ConeAlgebra::new(model, self.p)
    }

    /// Rescaling isomorphism onto the cone over `(k·omega)^{p+1}`:
    /// the theta slot divides by `k^{p+1}`.
    pub fn scaling_iso(&self, k: &Scalar, x: &ConeElement) -> Result<ConeElement, Error> {
        if k.is_zero() {
            return Err(Error::Input("scaling factor must be nonzero".into()));
        }
        let mut factor = scalar::one();
        for _ in 0..=self.p {
            factor *= k;
        }
        Ok(ConeElement {
            p: self.p,
            degree: x.degree,
            eta: x.eta.clone(),
            xi: x.xi.scaled(&(scalar::one() / factor)),
        })
    }
}

// ---------------------------------------------------------------------------
// Model morphisms and pullbacks
// ---------------------------------------------------------------------------

/// A map of models `source -> target`, recorded through its pullback on
/// degree-1 generators: `images[i]` is the pullback of the target
/// generator `e_i`, a 1-form on the source.
#[derive(Debug, Clone)]
pub struct ModelMorphism {
    source: Arc<LieModel>,
    target: Arc<LieModel>,
    images: BTreeMap<u8, Form>,
}

impl ModelMorphism {
    /// Builds and validates a morphism: the pullback must commute with the
    /// differentials and carry the target symplectic form to the source
    /// one. Violations are reported by name.
    pub fn new(
        source: Arc<LieModel>,
        target: Arc<LieModel>,
        images: BTreeMap<u8, Form>,
    ) -> Result<Self, Error> {
        let morphism = ModelMorphism {
            source,
            target,
            images,
        };
        for label in 1..=morphism.target.dim() as u8 {
            let image = morphism.generator_image(label)?;
            if !image.is_zero() && image.degree() != Some(1) {
                return Err(Error::BadMorphism(format!(
                    "pullback of e{label} must be a 1-form, got {image}"
                )));
            }
            let lhs = morphism.source.d(&image);
            let rhs = morphism.pullback(&morphism.target.d_generator(label))?;
            if lhs != rhs {
                return Err(Error::BadMorphism(format!(
                    "differentials do not commute on e{label}: d(pullback) = {lhs}, pullback(d) = {rhs}"
                )));
            }
        }
        let pulled = morphism.pullback(morphism.target.omega())?;
        if &pulled != morphism.source.omega() {
            return Err(Error::BadMorphism(format!(
                "symplectic form is not preserved: pullback(omega') = {pulled}"
            )));
        }
        Ok(morphism)
    }

    pub fn source(&self) -> &Arc<LieModel> {
        &self.source
    }

    pub fn target(&self) -> &Arc<LieModel> {
        &self.target
    }

    fn generator_image(&self, label: u8) -> Result<Form, Error> {
        if label == 0 || label as usize > self.target.dim() {
            return Err(Error::BadMorphism(format!(
                "generator e{label} outside the target model"
            )));
        }
        Ok(self
            .images
            .get(&label)
            .cloned()
            .unwrap_or_else(Form::zero))
    }

    /// Pullback of an arbitrary form on the target.
    pub fn pullback(&self, a: &Form) -> Result<Form, Error> {
        let mut out = Form::zero();
        for (ix, c) in a.terms() {
            let mut term = Form::one();
            for &label in ix.labels() {
                term = term.wedge(&self.generator_image(label)?);
                if term.is_zero() {
                    break;
                }
            }
            out = &out + &term.scaled(c);
        }
        Ok(out)
    }

    /// Identity morphism of a model.
    pub fn identity(model: Arc<LieModel>) -> Self {
        let images = (1..=model.dim() as u8)
            .map(|label| (label, Form::generator(label)))
            .collect();
        ModelMorphism {
            source: Arc::clone(&model),
            target: model,
            images,
        }
    }

    /// Composite `self ∘ earlier` of maps `earlier: A -> B`, `self: B -> C`
    /// is the map `A -> C`; its pullback is `earlier* ∘ self*`.
    pub fn compose_after(&self, earlier: &ModelMorphism) -> Result<ModelMorphism, Error> {
        if self.source.as_ref() != earlier.target.as_ref() {
            return Err(Error::BadMorphism(
                "composition mismatch: inner target differs from outer source".into(),
            ));
        }
        let mut images = BTreeMap::new();
        for label in 1..=self.target.dim() as u8 {
            let through = self.generator_image(label)?;
            images.insert(label, earlier.pullback(&through)?);
        }
        ModelMorphism::new(Arc::clone(&earlier.source), Arc::clone(&self.target), images)
    }

    /// Induced pullback on cones: slotwise on `eta` and `xi`.
    pub fn pullback_cone(&self, x: &ConeElement) -> Result<ConeElement, Error> {
        Ok(ConeElement {
            p: x.p,
            degree: x.degree,
            eta: self.pullback(&x.eta)?,
            xi: self.pullback(&x.xi)?,
        })
    }
}

// ---------------------------------------------------------------------------
// cdga and functoriality suites
// ---------------------------------------------------------------------------

fn witness(inputs: Vec<String>, lhs: &ConeElement, rhs: &ConeElement) -> Counterexample {
    Counterexample {
        inputs,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

/// Structural cdga axioms, basis-exhaustive: d² = 0, Leibniz, graded
/// commutativity, unit.
pub fn cdga_suite(cone: &ConeAlgebra) -> IdentityReport {
    let mut report = IdentityReport::new("cone-cdga", cone.model().name(), cone.p());
    let basis = cone.all_basis();

    let mut square = IdentityResult::exhaustive("d ∘ d = 0");
    for x in &basis {
        let dd = cone.d(&cone.d(x));
        square.record(dd.is_zero(), || {
            witness(vec![x.to_string()], &dd, &ConeElement::zero(cone.p(), 0))
        });
    }
    report.push(square);

    let mut leibniz = IdentityResult::exhaustive("Leibniz rule");
    let mut graded = IdentityResult::exhaustive("graded commutativity");
    for x in &basis {
        for y in &basis {
            let lhs = cone.d(&cone.m2(x, y));
            let mut rhs = cone.m2(&cone.d(x), y);
            let second = cone.m2(x, &cone.d(y));
            rhs = if x.degree() % 2 == 0 {
                rhs.add(&second)
            } else {
                rhs.sub(&second)
            };
            leibniz.record(lhs == rhs, || {
                witness(vec![x.to_string(), y.to_string()], &lhs, &rhs)
            });

            let forward = cone.m2(x, y);
            let mut backward = cone.m2(y, x);
            if (x.degree() * y.degree()) % 2 == 1 {
                backward = backward.neg();
            }
            graded.record(forward == backward, || {
                witness(vec![x.to_string(), y.to_string()], &forward, &backward)
            });
        }
    }
    report.push(leibniz);
    report.push(graded);

    let mut unit = IdentityResult::exhaustive("unit law");
    let one = cone.unit();
    for x in &basis {
        let left = cone.m2(&one, x);
        let right = cone.m2(x, &one);
        unit.record(&left == x && &right == x, || {
            witness(vec![x.to_string()], &left, &right)
        });
    }
    report.push(unit);

    report
}

/// Checks that a degree-preserving map `phi` between cone algebras is a
/// map of cdgas, basis-exhaustively: chain condition and multiplicativity.
pub fn cdga_map_suite(
    name: &str,
    source: &ConeAlgebra,
    target: &ConeAlgebra,
    phi: impl Fn(&ConeElement) -> ConeElement,
) -> IdentityReport {
    let mut report = IdentityReport::new(name, source.model().name(), source.p());
    let basis = source.all_basis();

    let mut chain = IdentityResult::exhaustive("commutes with the differential");
    for x in &basis {
        let lhs = phi(&source.d(x));
        let rhs = target.d(&phi(x));
        chain.record(lhs == rhs, || witness(vec![x.to_string()], &lhs, &rhs));
    }
    report.push(chain);

    let mut multiplicative = IdentityResult::exhaustive("commutes with the product");
    for x in &basis {
        for y in &basis {
            let lhs = phi(&source.m2(x, y));
            let rhs = target.m2(&phi(x), &phi(y));
            multiplicative.record(lhs == rhs, || {
                witness(vec![x.to_string(), y.to_string()], &lhs, &rhs)
            });
        }
    }
    report.push(multiplicative);

    let mut unit = IdentityResult::exhaustive("preserves the unit");
    let image = phi(&source.unit());
    unit.record(image == target.unit(), || {
        witness(vec!["1".into()], &image, &target.unit())
    });
    report.push(unit);

    report
}
