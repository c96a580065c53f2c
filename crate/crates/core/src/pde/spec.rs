//! Coefficient-list representation of first-order, constant-coefficient
//! nonlinear PDEs
//!
//! ```text
//! sum_k a_k y_k + sum_{jk} a_jk y_j y_k + ... + sum a_{jk..s} y_j y_k .. y_s + b = 0,
//! ```
//!
//! where `y_j` is the derivative with respect to variable `j`. A [`PdeSpec`]
//! in [`Form::Homogeneous`] is the image of the logarithmic substitution
//! `y = A ln psi`: a degree-`j` monomial reads `coeff * psi^(m-j) * prod psi_j`
//! and the free term multiplies `psi^m`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::PhysicalConstants;

/// One monomial `coeff * prod_{i in indices} d/dx_i`. Indices are zero-based
/// in memory and one-based in JSON.
#[derive(Debug, Clone, PartialEq)]
pub struct PdeTerm {
    indices: Vec<usize>,
    coeff: Complex64,
}

impl PdeTerm {
    pub fn new(indices: Vec<usize>, coeff: Complex64) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::invalid("a term needs degree >= 1"));
        }
        if !(coeff.re.is_finite() && coeff.im.is_finite()) {
            return Err(Error::invalid("term coefficient must be finite"));
        }
        Ok(Self { indices, coeff })
    }

    pub fn degree(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn coeff(&self) -> Complex64 {
        self.coeff
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Form {
    /// Equation in the original unknown `y`.
    Original,
    /// Equation in `psi` after `y = A ln psi`, carrying `A`.
    Homogeneous { transform_constant: Complex64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdeSpec {
    n: usize,
    m: usize,
    terms: Vec<PdeTerm>,
    b: Complex64,
    form: Form,
}

impl PdeSpec {
    pub fn new(n: usize, m: usize, terms: Vec<PdeTerm>, b: Complex64) -> Result<Self> {
        Self::with_form(n, m, terms, b, Form::Original)
    }

    pub fn with_form(
        n: usize,
        m: usize,
        terms: Vec<PdeTerm>,
        b: Complex64,
        form: Form,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a PDE needs n >= 1 arguments"));
        }
        if m == 0 {
            return Err(Error::invalid("a PDE needs order m >= 1"));
        }
        if !(b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::invalid("free term must be finite"));
        }
        for t in &terms {
            if t.degree() > m {
                return Err(Error::invalid(format!(
                    "term degree {} exceeds order m = {m}",
                    t.degree()
                )));
            }
            if let Some(&bad) = t.indices.iter().find(|&&i| i >= n) {
                return Err(Error::invalid(format!(
                    "term index {} out of range 1..={n}",
                    bad + 1
                )));
            }
        }
        if !terms.iter().any(|t| t.degree() == m) {
            return Err(Error::invalid(format!("no term reaches the declared order m = {m}")));
        }
        if let Form::Homogeneous { transform_constant } = form {
            if transform_constant == Complex64::new(0.0, 0.0) {
                return Err(Error::invalid("transform constant must be nonzero"));
            }
        }
        Ok(Self { n, m, terms, b, form })
    }

    /// Relativistic Hamilton-Jacobi equation for a free particle,
    /// `S_t^2 - c^2 |grad S|^2 - m0^2 c^4 = 0`, in `space_dims` spatial
    /// variables followed by time as the last variable.
    pub fn hamilton_jacobi(space_dims: usize, consts: &PhysicalConstants) -> Result<Self> {
        if space_dims == 0 {
            return Err(Error::invalid("need at least one spatial dimension"));
        }
        let n = space_dims + 1;
        let c2 = consts.c * consts.c;
        let mut terms: Vec<PdeTerm> = (0..space_dims)
            .map(|s| PdeTerm::new(vec![s, s], Complex64::new(-c2, 0.0)))
            .collect::<Result<_>>()?;
        terms.push(PdeTerm::new(vec![n - 1, n - 1], Complex64::new(1.0, 0.0))?);
        let e0 = consts.rest_energy();
        Self::new(n, 2, terms, Complex64::new(-e0 * e0, 0.0))
    }

    /// Quadratic form `sum_jk a_jk y_j y_k + b` from a dense coefficient matrix.
    /// Zero entries are skipped.
    pub fn quadratic(a: &[Vec<Complex64>], b: Complex64) -> Result<Self> {
        let n = a.len();
        let mut terms = Vec::new();
        for (j, row) in a.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid("coefficient matrix must be square"));
            }
            for (k, &c) in row.iter().enumerate() {
                if c != Complex64::new(0.0, 0.0) {
                    terms.push(PdeTerm::new(vec![j, k], c)?);
                }
            }
        }
        Self::new(n, 2, terms, b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &[PdeTerm] {
        &self.terms
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn is_homogeneous(&self) -> bool {
        matches!(self.form, Form::Homogeneous { .. })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SpecRepr::from(self)).expect("spec serialization cannot fail")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&SpecRepr::from(self)).expect("spec serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: SpecRepr =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        repr.try_into()
    }
}

/// `sum_jk second_order[j][k] psi_jk + zeroth * psi = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearPdeSpec {
    second_order: Vec<Vec<Complex64>>,
    zeroth: Complex64,
}

impl LinearPdeSpec {
    pub fn new(second_order: Vec<Vec<Complex64>>, zeroth: Complex64) -> Result<Self> {
        let n = second_order.len();
        if n == 0 || second_order.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("second-order coefficients must form a nonempty square matrix"));
        }
        Ok(Self { second_order, zeroth })
    }

    pub fn n(&self) -> usize {
        self.second_order.len()
    }

    pub fn second_order(&self) -> &[Vec<Complex64>] {
        &self.second_order
    }

    pub fn zeroth(&self) -> Complex64 {
        self.zeroth
    }

    pub fn negated(&self) -> Self {
        // 0 - c rather than -c so zero entries stay +0
        let flip = |c: Complex64| Complex64::new(0.0, 0.0) - c;
        Self {
            second_order: self
                .second_order
                .iter()
                .map(|r| r.iter().map(|&c| flip(c)).collect())
                .collect(),
            zeroth: flip(self.zeroth),
        }
    }

    /// Overall sign chosen so the coefficient of the last variable's second
    /// derivative (time, by convention) has non-negative real part. The
    /// equation is unchanged.
    pub fn sign_normalized(&self) -> Self {
        let n = self.n();
        if self.second_order[n - 1][n - 1].re < 0.0 {
            self.negated()
        } else {
            self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&LinearRepr::from(self)).expect("linear spec serialization cannot fail")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&LinearRepr::from(self))
            .expect("linear spec serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: LinearRepr =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if repr.n != repr.second_order_coeffs.len() {
            return Err(Error::invalid("declared n does not match the coefficient matrix"));
        }
        Self::new(
            repr.second_order_coeffs
                .into_iter()
                .map(|r| r.into_iter().map(pair_to_c).collect())
                .collect(),
            pair_to_c(repr.zeroth_coeff),
        )
    }
}

fn c_to_pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

fn pair_to_c(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRepr {
    degree: usize,
    indices: Vec<usize>,
    coeff: [f64; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecRepr {
    n: usize,
    m: usize,
    terms: Vec<TermRepr>,
    b: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    transform_constant: Option<[f64; 2]>,
}

impl From<&PdeSpec> for SpecRepr {
    fn from(s: &PdeSpec) -> Self {
        SpecRepr {
            n: s.n,
            m: s.m,
            terms: s
                .terms
                .iter()
                .map(|t| TermRepr {
                    degree: t.degree(),
                    indices: t.indices.iter().map(|i| i + 1).collect(),
                    coeff: c_to_pair(t.coeff),
                })
                .collect(),
            b: c_to_pair(s.b),
            transform_constant: match s.form {
                Form::Original => None,
                Form::Homogeneous { transform_constant } => Some(c_to_pair(transform_constant)),
            },
        }
    }
}

impl TryFrom<SpecRepr> for PdeSpec {
    type Error = Error;

    fn try_from(r: SpecRepr) -> Result<Self> {
        let mut terms = Vec::with_capacity(r.terms.len());
        for t in r.terms {
            if t.indices.len() != t.degree {
                return Err(Error::invalid(format!(
                    "term declares degree {} but lists {} indices",
                    t.degree,
                    t.indices.len()
                )));
            }
            if t.indices.iter().any(|&i| i == 0 || i > r.n) {
                return Err(Error::invalid(format!(
                    "term indices {:?} must lie in 1..={}",
                    t.indices, r.n
                )));
            }
            terms.push(PdeTerm::new(
                t.indices.iter().map(|i| i - 1).collect(),
                pair_to_c(t.coeff),
            )?);
        }
        let form = match r.transform_constant {
            None => Form::Original,
            Some(a) => Form::Homogeneous { transform_constant: pair_to_c(a) },
        };
        PdeSpec::with_form(r.n, r.m, terms, pair_to_c(r.b), form)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinearRepr {
    n: usize,
    second_order_coeffs: Vec<Vec<[f64; 2]>>,
    zeroth_coeff: [f64; 2],
}

impl From<&LinearPdeSpec> for LinearRepr {
    fn from(l: &LinearPdeSpec) -> Self {
        LinearRepr {
            n: l.n(),
            second_order_coeffs: l
                .second_order
                .iter()
                .map(|r| r.iter().map(|&c| c_to_pair(c)).collect())
                .collect(),
            zeroth_coeff: c_to_pair(l.zeroth),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn hamilton_jacobi_layout() {
        let s = PdeSpec::hamilton_jacobi(3, &PhysicalConstants::new(1.0, 2.0, 3.0).unwrap()).unwrap();
        assert_eq!(s.n(), 4);
        assert_eq!(s.m(), 2);
        assert_eq!(s.b(), c(-(3.0f64 * 4.0).powi(2)));
        assert_eq!(s.terms().len(), 4);
        assert_eq!(s.terms()[3].indices(), &[3, 3]);
        assert_eq!(s.terms()[0].coeff(), c(-4.0));
    }

    #[test]
    fn validation() {
        let t2 = PdeTerm::new(vec![0, 0], c(1.0)).unwrap();
        assert!(PdeSpec::new(1, 3, vec![t2.clone()], c(0.0)).is_err(), "m not tight");
        assert!(PdeSpec::new(1, 1, vec![t2.clone()], c(0.0)).is_err(), "degree above m");
        assert!(PdeSpec::new(1, 2, vec![PdeTerm::new(vec![0, 1], c(1.0)).unwrap()], c(0.0)).is_err());
        assert!(PdeTerm::new(vec![], c(1.0)).is_err());
        assert!(PdeSpec::new(1, 2, vec![t2], c(0.0)).is_ok());
    }

    #[test]
    fn json_schema_shape() {
        let s = PdeSpec::new(
            2,
            2,
            vec![
                PdeTerm::new(vec![1], Complex64::new(0.5, -1.0)).unwrap(),
                PdeTerm::new(vec![0, 1], c(2.0)).unwrap(),
            ],
            Complex64::new(-1.0, 0.25),
        )
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v["n"], 2);
        assert_eq!(v["terms"][0]["degree"], 1);
        assert_eq!(v["terms"][0]["indices"], serde_json::json!([2]));
        assert_eq!(v["terms"][1]["indices"], serde_json::json!([1, 2]));
        assert_eq!(v["terms"][0]["coeff"], serde_json::json!([0.5, -1.0]));
        assert_eq!(v["b"], serde_json::json!([-1.0, 0.25]));
        assert!(v.get("transform_constant").is_none());
    }

    #[test]
    fn json_rejects_bad_documents() {
        let bad_degree = r#"{"n":1,"m":2,"terms":[{"degree":1,"indices":[1,1],"coeff":[1,0]}],"b":[0,0]}"#;
        assert!(PdeSpec::from_json(bad_degree).is_err());
        let zero_index = r#"{"n":1,"m":2,"terms":[{"degree":2,"indices":[0,1],"coeff":[1,0]}],"b":[0,0]}"#;
        assert!(PdeSpec::from_json(zero_index).is_err());
        let unknown = r#"{"n":1,"m":2,"terms":[{"degree":2,"indices":[1,1],"coeff":[1,0]}],"b":[0,0],"x":1}"#;
        assert!(PdeSpec::from_json(unknown).is_err());
        let ok = r#"{"n":1,"m":2,"terms":[{"degree":2,"indices":[1,1],"coeff":[1,0]}],"b":[0,0]}"#;
        assert!(PdeSpec::from_json(ok).is_ok());
    }

    #[test]
    fn linear_sign_normalization() {
        let l = LinearPdeSpec::new(vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(-1.0)]], c(-1.0)).unwrap();
        let n = l.sign_normalized();
        assert_eq!(n.second_order()[1][1], c(1.0));
        assert_eq!(n.zeroth(), c(1.0));
        assert_eq!(LinearPdeSpec::from_json(&l.to_json()).unwrap(), l);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn finite() -> impl Strategy<Value = f64> {
            prop_oneof![-1e300f64..1e300, -1.0f64..1.0, Just(0.0), Just(-0.0)]
        }

        fn spec() -> impl Strategy<Value = PdeSpec> {
            (1usize..5, 1usize..4).prop_flat_map(|(n, m)| {
                let term = (1..=m)
                    .prop_flat_map(move |deg| proptest::collection::vec(0..n, deg))
                    .prop_flat_map(|idx| (Just(idx), finite(), finite()));
                (
                    Just(n),
                    Just(m),
                    proptest::collection::vec(term, 0..6),
                    proptest::collection::vec(0..n, m),
                    finite(),
                    finite(),
                    proptest::option::of((finite(), finite())),
                )
                    .prop_map(|(n, m, terms, top, br, bi, a)| {
                        let mut terms: Vec<PdeTerm> = terms
                            .into_iter()
                            .map(|(idx, re, im)| PdeTerm::new(idx, Complex64::new(re, im)).unwrap())
                            .collect();
                        terms.push(PdeTerm::new(top, Complex64::new(1.0, 0.0)).unwrap());
                        let form = match a {
                            Some((re, im)) if re != 0.0 || im != 0.0 => {
                                Form::Homogeneous { transform_constant: Complex64::new(re, im) }
                            }
                            _ => Form::Original,
                        };
                        PdeSpec::with_form(n, m, terms, Complex64::new(br, bi), form).unwrap()
                    })
            })
        }

        proptest! {
            #[test]
            fn json_round_trip_exact(s in spec()) {
                let text = s.to_json();
                let back = PdeSpec::from_json(&text).unwrap();
                prop_assert_eq!(&back, &s);
                prop_assert_eq!(back.to_json(), text);
            }
        }
    }
}
