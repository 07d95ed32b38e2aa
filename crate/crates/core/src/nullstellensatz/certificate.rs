use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{multilinear_product, FieldSpec, Monomial, NsError, PebblingFormula, Poly};
use crate::graph::{Dag, VertexId};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    Vertex(VertexId),
    Sink,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertMode {
    Multilinear,
    Standard,
}

/// Nullstellensatz refutation of a pebbling formula: one multiplier per
/// axiom, plus multipliers of the Boolean axioms `x^2 - x` in standard mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub field: FieldSpec,
    pub mode: CertMode,
    pub multipliers: BTreeMap<AxiomId, Poly>,
    pub boolean_multipliers: BTreeMap<usize, Poly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub valid: bool,
    pub size: usize,
    pub degree: usize,
    /// The combination minus one; zero exactly when the refutation is valid.
    pub residual: Poly,
}

impl Certificate {
    pub fn new(field: FieldSpec, mode: CertMode) -> Self {
        Certificate {
            field,
            mode,
            multipliers: BTreeMap::new(),
            boolean_multipliers: BTreeMap::new(),
        }
    }

    /// The multiplier of `id`, zero when absent.
    pub fn multiplier(&self, id: AxiomId) -> Poly {
        self.multipliers
            .get(&id)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.field))
    }

    /// All multipliers re-read over `field`.
    pub fn to_field(&self, field: FieldSpec) -> Result<Certificate, NsError> {
        let multipliers = self
            .multipliers
            .iter()
            .map(|(&id, p)| Ok((id, p.to_field(field)?)))
            .collect::<Result<_, NsError>>()?;
        let boolean_multipliers = self
            .boolean_multipliers
            .iter()
            .map(|(&x, p)| Ok((x, p.to_field(field)?)))
            .collect::<Result<_, NsError>>()?;
        Ok(Certificate {
            field,
            mode: self.mode,
            multipliers,
            boolean_multipliers,
        })
    }
}

fn check_fields(cert: &Certificate) -> Result<(), NsError> {
    for p in cert.multipliers.values().chain(cert.boolean_multipliers.values()) {
        if p.field() != cert.field {
            return Err(NsError::FieldMismatch(cert.field, p.field()));
        }
    }
    Ok(())
}

fn pair_degree(q: &Poly, a: &Poly, mode: CertMode) -> usize {
    if q.is_zero() {
        return 0;
    }
    match mode {
        CertMode::Standard => q.degree() + a.degree(),
        CertMode::Multilinear => q
            .terms()
            .flat_map(|(m, _)| a.terms().map(move |(n, _)| m.union(n).var_count()))
            .max()
            .unwrap_or(0),
    }
}

/// Checks that the certificate combines the axioms of `formula` into `1`
/// and measures it: size counts the monomials of every product before
/// cancellation, degree is the largest monomial encountered (in multilinear
/// mode, the number of distinct variables of each monomial pair).
pub fn verify(formula: &PebblingFormula, cert: &Certificate) -> Result<VerifyReport, NsError> {
    let field = cert.field.validated()?;
    check_fields(cert)?;
    if cert.mode == CertMode::Multilinear && !cert.boolean_multipliers.is_empty() {
        return Err(NsError::BooleanMultipliersInMultilinearMode);
    }
    let mut total = Poly::zero(field);
    let mut size = 0;
    let mut degree = 0;
    for (&id, q) in &cert.multipliers {
        let axiom = formula
            .axiom(id)
            .ok_or_else(|| NsError::UnknownAxiom(format!("{id:?}")))?
            .to_field(field)?;
        size += q.len() * axiom.len();
        degree = degree.max(pair_degree(q, &axiom, cert.mode));
        let product = match cert.mode {
            CertMode::Multilinear => multilinear_product(q, &axiom)?,
            CertMode::Standard => q.mul(&axiom)?,
        };
        total.add_assign(&product)?;
    }
    for (&x, s) in &cert.boolean_multipliers {
        if x >= formula.var_count() {
            return Err(NsError::UnknownVariable(format!("x{x}")));
        }
        let mut boolean = Poly::term(field, Monomial::from_powers([(x, 2)]), BigRational::one());
        boolean.add_term(Monomial::from_vars([x]), &field.neg(&BigRational::one()));
        size += 2 * s.len();
        if !s.is_zero() {
            degree = degree.max(s.degree() + 2);
        }
        total.add_assign(&s.mul(&boolean)?)?;
    }
    total.add_assign(&Poly::one(field).neg())?;
    Ok(VerifyReport {
        valid: total.is_zero(),
        size,
        degree,
        residual: total,
    })
}

/// Clamps every exponent and drops the Boolean multipliers. Fails with
/// [`NsError::ResultInvalid`] unless the result is a valid refutation.
pub fn multilinearize(formula: &PebblingFormula, cert: &Certificate) -> Result<Certificate, NsError> {
    let out = Certificate {
        field: cert.field,
        mode: CertMode::Multilinear,
        multipliers: cert
            .multipliers
            .iter()
            .map(|(&id, q)| (id, q.multilinearize()))
            .filter(|(_, q)| !q.is_zero())
            .collect(),
        boolean_multipliers: BTreeMap::new(),
    };
    if verify(formula, &out)?.valid {
        Ok(out)
    } else {
        Err(NsError::ResultInvalid)
    }
}

#[derive(Serialize, Deserialize)]
struct CertFile {
    field: FieldSpec,
    mode: CertMode,
    multipliers: Vec<MultiplierRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    boolean_multipliers: Vec<BooleanRecord>,
}

#[derive(Serialize, Deserialize)]
struct MultiplierRecord {
    axiom: String,
    poly: Vec<TermRecord>,
}

#[derive(Serialize, Deserialize)]
struct BooleanRecord {
    var: String,
    poly: Vec<TermRecord>,
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    coeff: String,
    vars: Vec<String>,
}

fn write_poly(dag: &Dag, p: &Poly) -> Vec<TermRecord> {
    p.terms()
        .map(|(m, c)| TermRecord {
            coeff: p.field().render(c),
            vars: m
                .powers()
                .iter()
                .flat_map(|&(x, e)| std::iter::repeat_n(dag.name(VertexId::new(x)).to_string(), e as usize))
                .collect(),
        })
        .collect()
}

fn read_poly(dag: &Dag, field: FieldSpec, terms: &[TermRecord]) -> Result<Poly, NsError> {
    let mut p = Poly::zero(field);
    for t in terms {
        let vars = t
            .vars
            .iter()
            .map(|n| {
                dag.id(n)
                    .map(|v| (v.index(), 1))
                    .ok_or_else(|| NsError::UnknownVariable(n.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        p.add_term(Monomial::from_powers(vars), &field.parse(&t.coeff)?);
    }
    Ok(p)
}

fn axiom_name(dag: &Dag, id: AxiomId) -> String {
    match id {
        AxiomId::Vertex(v) => format!("vertex:{}", dag.name(v)),
        AxiomId::Sink => "sink".to_string(),
    }
}

fn parse_axiom(dag: &Dag, name: &str) -> Result<AxiomId, NsError> {
    if name == "sink" {
        return Ok(AxiomId::Sink);
    }
    name.strip_prefix("vertex:")
        .and_then(|v| dag.id(v))
        .map(AxiomId::Vertex)
        .ok_or_else(|| NsError::UnknownAxiom(name.to_string()))
}

impl Certificate {
    /// Serializes with variables and axioms named after the vertices of
    /// `dag`; a repeated variable name stands for a higher power.
    pub fn to_json(&self, dag: &Dag) -> String {
        let file = CertFile {
            field: self.field,
            mode: self.mode,
            multipliers: self
                .multipliers
                .iter()
                .map(|(&id, p)| MultiplierRecord {
                    axiom: axiom_name(dag, id),
                    poly: write_poly(dag, p),
                })
                .collect(),
            boolean_multipliers: self
                .boolean_multipliers
                .iter()
                .map(|(&x, p)| BooleanRecord {
                    var: dag.name(VertexId::new(x)).to_string(),
                    poly: write_poly(dag, p),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("certificate serialization cannot fail")
    }

    /// Parses a certificate; coefficients are read in `field_override` when
    /// given, else in the field recorded in the file.
    pub fn from_json(dag: &Dag, text: &str, field_override: Option<FieldSpec>) -> Result<Certificate, NsError> {
        let file: CertFile = serde_json::from_str(text).map_err(|e| NsError::Format(e.to_string()))?;
        let field = field_override.unwrap_or(file.field).validated()?;
        let mut cert = Certificate::new(field, file.mode);
        for rec in &file.multipliers {
            let id = parse_axiom(dag, &rec.axiom)?;
            let p = read_poly(dag, field, &rec.poly)?;
            cert.multipliers.entry(id).or_insert_with(|| Poly::zero(field)).add_assign(&p)?;
        }
        for rec in &file.boolean_multipliers {
            let x = dag
                .id(&rec.var)
                .ok_or_else(|| NsError::UnknownVariable(rec.var.clone()))?
                .index();
            let p = read_poly(dag, field, &rec.poly)?;
            cert.boolean_multipliers.entry(x).or_insert_with(|| Poly::zero(field)).add_assign(&p)?;
        }
        Ok(cert)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_dag, line};
    use crate::nullstellensatz::pebbling_formula;

    fn c(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn x(vars: &[usize]) -> Monomial {
        Monomial::from_vars(vars.iter().copied())
    }

    fn mono(field: FieldSpec, vars: &[usize]) -> Poly {
        Poly::from_terms(field, [(x(vars), c(1))]).unwrap()
    }

    fn v(i: usize) -> AxiomId {
        AxiomId::Vertex(VertexId::new(i))
    }

    fn single_vertex_cert(field: FieldSpec, q_sink: Poly) -> (PebblingFormula, Certificate) {
        let g = build_dag(&["z"], &[], None).unwrap();
        let mut cert = Certificate::new(field, CertMode::Multilinear);
        cert.multipliers.insert(v(0), Poly::one(field));
        cert.multipliers.insert(AxiomId::Sink, q_sink);
        (pebbling_formula(&g).unwrap(), cert)
    }

    #[test]
    fn single_vertex_refutation() {
        let f2 = FieldSpec::Prime(2);
        let (formula, cert) = single_vertex_cert(f2, Poly::one(f2));
        let r = verify(&formula, &cert).unwrap();
        assert!(r.valid);
        assert_eq!((r.size, r.degree), (3, 1));
    }

    #[test]
    fn dropped_sink_axiom_leaves_residual() {
        let q = FieldSpec::Rationals;
        let (formula, cert) = single_vertex_cert(q, Poly::zero(q));
        let r = verify(&formula, &cert).unwrap();
        assert!(!r.valid);
        assert_eq!(r.residual, Poly::from_terms(q, [(x(&[0]), c(-1))]).unwrap());
        assert_eq!(r.size, 2);
    }

    #[test]
    fn line_two_by_hand() {
        let f3 = FieldSpec::Prime(3);
        let formula = pebbling_formula(&line(2).unwrap()).unwrap();
        let mut cert = Certificate::new(f3, CertMode::Multilinear);
        cert.multipliers.insert(v(0), Poly::one(f3));
        cert.multipliers.insert(v(1), Poly::one(f3));
        cert.multipliers.insert(AxiomId::Sink, mono(f3, &[0]));
        let r = verify(&formula, &cert).unwrap();
        assert!(r.valid, "{:?}", r.residual);
        assert_eq!((r.size, r.degree), (5, 2));
    }

    #[test]
    fn standard_mode_with_boolean_axioms() {
        // x_z^2 instead of x_z on the sink, repaired by s_z = -1
        let q = FieldSpec::Rationals;
        let g = build_dag(&["z"], &[], None).unwrap();
        let formula = pebbling_formula(&g).unwrap();
        let mut cert = Certificate::new(q, CertMode::Standard);
        cert.multipliers.insert(v(0), Poly::one(q));
        cert.multipliers.insert(AxiomId::Sink, mono(q, &[0]));
        let r = verify(&formula, &cert).unwrap();
        assert!(!r.valid);
        cert.boolean_multipliers.insert(0, Poly::one(q).neg());
        let r = verify(&formula, &cert).unwrap();
        assert!(r.valid, "{:?}", r.residual);
        assert_eq!((r.size, r.degree), (2 + 1 + 2, 2));

        let ml = multilinearize(&formula, &cert).unwrap();
        assert_eq!(ml.mode, CertMode::Multilinear);
        assert!(ml.boolean_multipliers.is_empty());
        let r2 = verify(&formula, &ml).unwrap();
        assert!(r2.valid);
        assert!(r2.size <= r.size && r2.degree <= r.degree);
        assert_eq!(multilinearize(&formula, &ml).unwrap(), ml);
    }

    #[test]
    fn multilinearize_rejects_invalid() {
        let q = FieldSpec::Rationals;
        let (formula, cert) = single_vertex_cert(q, Poly::zero(q));
        assert_eq!(multilinearize(&formula, &cert), Err(NsError::ResultInvalid));
    }

    #[test]
    fn mode_and_field_errors() {
        let f2 = FieldSpec::Prime(2);
        let (formula, mut cert) = single_vertex_cert(f2, Poly::one(f2));
        cert.boolean_multipliers.insert(0, Poly::one(f2));
        assert_eq!(verify(&formula, &cert), Err(NsError::BooleanMultipliersInMultilinearMode));
        let (formula, mut cert) = single_vertex_cert(f2, Poly::one(f2));
        cert.multipliers.insert(AxiomId::Sink, Poly::one(FieldSpec::Prime(3)));
        assert!(matches!(verify(&formula, &cert), Err(NsError::FieldMismatch(..))));
        let (formula, mut cert) = single_vertex_cert(f2, Poly::one(f2));
        cert.multipliers.insert(v(7), Poly::one(f2));
        assert!(matches!(verify(&formula, &cert), Err(NsError::UnknownAxiom(_))));
    }

    #[test]
    fn json_round_trip() {
        let g = line(2).unwrap();
        let f5 = FieldSpec::Prime(5);
        let mut cert = Certificate::new(f5, CertMode::Standard);
        cert.multipliers.insert(v(1), Poly::from_terms(f5, [(x(&[0]), c(-1)), (Monomial::one(), c(2))]).unwrap());
        cert.multipliers.insert(AxiomId::Sink, mono(f5, &[0]));
        cert.boolean_multipliers.insert(0, mono(f5, &[0]).mul(&mono(f5, &[0])).unwrap());
        let text = cert.to_json(&g);
        assert!(text.contains("\"prime\": 5"));
        assert!(text.contains("\"vertex:v2\""));
        assert!(text.contains("\"-1\""));
        assert!(text.contains("\"v1\",\n"));
        let back = Certificate::from_json(&g, &text, None).unwrap();
        assert_eq!(back, cert);
        let over_q = Certificate::from_json(&g, &text, Some(FieldSpec::Rationals)).unwrap();
        assert_eq!(over_q.multiplier(v(1)).coeff(&x(&[0])), c(-1));
    }

    #[test]
    fn json_errors() {
        let g = line(2).unwrap();
        let bad_axiom = r#"{"field":"rationals","mode":"multilinear","multipliers":[{"axiom":"vertex:nope","poly":[]}]}"#;
        assert!(matches!(Certificate::from_json(&g, bad_axiom, None), Err(NsError::UnknownAxiom(_))));
        let bad_field = r#"{"field":{"prime":4},"mode":"multilinear","multipliers":[]}"#;
        assert_eq!(Certificate::from_json(&g, bad_field, None), Err(NsError::NotPrime(4)));
        let bad_coeff = r#"{"field":"rationals","mode":"multilinear","multipliers":[{"axiom":"sink","poly":[{"coeff":"x","vars":[]}]}]}"#;
        assert!(matches!(Certificate::from_json(&g, bad_coeff, None), Err(NsError::Format(_))));
        assert!(matches!(Certificate::from_json(&g, "{", None), Err(NsError::Format(_))));
    }
}
