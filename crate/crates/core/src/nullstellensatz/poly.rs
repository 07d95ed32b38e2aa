use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{FieldSpec, NsError};

/// A monomial as sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// The square-free monomial `x_U`.
    pub fn from_vars(vars: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = vars.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Monomial(v.into_iter().map(|x| (x, 1)).collect())
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut acc: BTreeMap<usize, u32> = BTreeMap::new();
        for (x, e) in powers {
            *acc.entry(x).or_default() += e;
        }
        Monomial(acc.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn powers(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&(x, _)| x)
    }

    pub fn contains(&self, var: usize) -> bool {
        self.0.binary_search_by_key(&var, |&(x, _)| x).is_ok()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&(_, e)| e as usize).sum()
    }

    pub fn var_count(&self) -> usize {
        self.0.len()
    }

    pub fn is_multilinear(&self) -> bool {
        self.0.iter().all(|&(_, e)| e == 1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_powers(self.0.iter().chain(&other.0).copied())
    }

    /// Product with exponents clamped to one.
    pub fn union(&self, other: &Monomial) -> Monomial {
        Monomial::from_vars(self.vars().chain(other.vars()))
    }

    pub fn clamped(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(x, _)| (x, 1)).collect())
    }
}

/// Sparse polynomial over a [`FieldSpec`]; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: FieldSpec,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero(field: FieldSpec) -> Self {
        Poly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::term(field, Monomial::one(), BigRational::one())
    }

    pub fn monomial(field: FieldSpec, m: Monomial) -> Self {
        Self::term(field, m, BigRational::one())
    }

    /// `coeff * m`; `coeff` must already be a field element.
    pub fn term(field: FieldSpec, m: Monomial, coeff: BigRational) -> Self {
        let mut p = Self::zero(field);
        p.add_term(m, &coeff);
        p
    }

    /// Builds a polynomial from rational coefficients, mapping them into
    /// `field`.
    pub fn from_terms(
        field: FieldSpec,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Result<Self, NsError> {
        let mut p = Self::zero(field);
        for (m, c) in terms {
            let c = field.normalize(&c)?;
            p.add_term(m, &c);
        }
        Ok(p)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::one()).is_some_and(|c| c.is_one())
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(Monomial::is_multilinear)
    }

    /// Adds `coeff * m` in place; `coeff` must already be a field element.
    pub fn add_term(&mut self, m: Monomial, coeff: &BigRational) {
        if coeff.is_zero() {
            return;
        }
        let field = self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = field.add(e.get(), coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn same_field(&self, other: &Poly) -> Result<(), NsError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(NsError::FieldMismatch(self.field, other.field))
        }
    }

    pub fn add_assign(&mut self, other: &Poly) -> Result<(), NsError> {
        self.same_field(other)?;
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
        Ok(())
    }

    pub fn neg(&self) -> Poly {
        self.scale(&self.field.neg(&BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        let mut out = Poly::zero(self.field);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), &self.field.mul(a, c));
        }
        out
    }

    fn product(&self, other: &Poly, combine: impl Fn(&Monomial, &Monomial) -> Monomial) -> Result<Poly, NsError> {
        self.same_field(other)?;
        let mut out = Poly::zero(self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(combine(m1, m2), &self.field.mul(c1, c2));
            }
        }
        Ok(out)
    }

    /// Exact product.
    pub fn mul(&self, other: &Poly) -> Result<Poly, NsError> {
        self.product(other, Monomial::mul)
    }

    /// Replaces every `x^e` by `x`.
    pub fn multilinearize(&self) -> Poly {
        let mut out = Poly::zero(self.field);
        for (m, c) in &self.terms {
            out.add_term(m.clamped(), c);
        }
        out
    }

    /// The same polynomial read over another field.
    pub fn to_field(&self, field: FieldSpec) -> Result<Poly, NsError> {
        let lifted = self.terms.iter().map(|(m, c)| {
            let c = match self.field {
                FieldSpec::Rationals => c.clone(),
                FieldSpec::Prime(p) => lift_symmetric(c, p),
            };
            (m.clone(), c)
        });
        Poly::from_terms(field, lifted)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

fn lift_symmetric(c: &BigRational, p: u64) -> BigRational {
    let p = BigRational::from_integer(p.into());
    if c * BigRational::from_integer(2.into()) > p {
        c - p
    } else {
        c.clone()
    }
}

/// Product of two polynomials with every exponent clamped to one.
pub fn multilinear_product(p: &Poly, q: &Poly) -> Result<Poly, NsError> {
    p.product(q, Monomial::union)
}

/// Renders a polynomial with variables named after graph vertices.
pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.poly.terms().enumerate() {
            let c = self.poly.field.render(c);
            let (sign, mag) = match c.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", c),
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let unit = mag == "1" && m.var_count() > 0;
            if !unit {
                write!(f, "{mag}")?;
            }
            for (j, &(x, e)) in m.powers().iter().enumerate() {
                if j > 0 || !unit {
                    write!(f, "*")?;
                }
                match self.names.get(x) {
                    Some(n) => write!(f, "x[{n}]")?,
                    None => write!(f, "x{x}")?,
                }
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn c(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn x(vars: &[usize]) -> Monomial {
        Monomial::from_vars(vars.iter().copied())
    }

    fn poly(field: FieldSpec, terms: &[(i64, &[usize])]) -> Poly {
        Poly::from_terms(field, terms.iter().map(|&(k, v)| (x(v), c(k)))).unwrap()
    }

    #[test]
    fn monomial_algebra() {
        let a = x(&[3, 1]);
        assert_eq!(a.powers(), &[(1, 1), (3, 1)]);
        let sq = a.mul(&x(&[1]));
        assert_eq!(sq.powers(), &[(1, 2), (3, 1)]);
        assert_eq!(sq.degree(), 3);
        assert!(!sq.is_multilinear());
        assert_eq!(sq.clamped(), a);
        assert_eq!(a.union(&x(&[1, 2])), x(&[1, 2, 3]));
        assert!(a.contains(3) && !a.contains(2));
    }

    #[test]
    fn idempotent_square() {
        let xa = poly(Q, &[(1, &[0])]);
        assert_eq!(multilinear_product(&xa, &xa).unwrap(), xa);
    }

    #[test]
    fn boolean_axiom_product_vanishes() {
        let one_minus = poly(Q, &[(1, &[]), (-1, &[0])]);
        let xa = poly(Q, &[(1, &[0])]);
        assert!(multilinear_product(&one_minus, &xa).unwrap().is_zero());
        assert_eq!(one_minus.mul(&xa).unwrap().len(), 2);
    }

    #[test]
    fn vertex_axiom_times_variable() {
        // (1 - x_u) x_p x_q times x_v, variables p=0 q=1 u=2 v=3
        let a = poly(Q, &[(1, &[0, 1]), (-1, &[0, 1, 2])]);
        let xv = poly(Q, &[(1, &[3])]);
        let expected = poly(Q, &[(1, &[0, 1, 3]), (-1, &[0, 1, 2, 3])]);
        assert_eq!(multilinear_product(&a, &xv).unwrap(), expected);
    }

    #[test]
    fn prime_field_cancellation() {
        let f2 = FieldSpec::Prime(2);
        let mut p = poly(f2, &[(1, &[0])]);
        p.add_assign(&poly(f2, &[(1, &[0])])).unwrap();
        assert!(p.is_zero());
        let f3 = FieldSpec::Prime(3);
        let q = poly(f3, &[(-1, &[1])]);
        assert_eq!(q.coeff(&x(&[1])), c(2));
        assert_eq!(q.to_field(Q).unwrap(), poly(Q, &[(-1, &[1])]));
    }

    #[test]
    fn field_mismatch() {
        let a = Poly::one(Q);
        let b = Poly::one(FieldSpec::Prime(5));
        assert_eq!(
            multilinear_product(&a, &b),
            Err(NsError::FieldMismatch(Q, FieldSpec::Prime(5)))
        );
        assert!(a.clone().add_assign(&b).is_err());
    }

    #[test]
    fn rendering() {
        let names: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let p = poly(FieldSpec::Prime(5), &[(1, &[]), (-1, &[0]), (2, &[0, 1])]);
        assert_eq!(p.display(&names).to_string(), "1 - x[a] + 2*x[a]*x[b]");
        assert_eq!(Poly::zero(Q).display(&names).to_string(), "0");
        let sq = poly(Q, &[(1, &[0])]).mul(&poly(Q, &[(-3, &[0])])).unwrap();
        assert_eq!(sq.display(&names).to_string(), "-3*x[a]^2");
    }
}
