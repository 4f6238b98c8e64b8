//! JSON wire formats: exact scalar encodings, matrices, generator words,
//! equivalence chains, automorphism descriptions, decomposition reports,
//! and suite reports.
//!
//! All integers travel as decimal strings so values of any size survive
//! bit-exactly. Permutations and matrix indices are 1-based on the wire.
//! Maps are ordered, so serialization is deterministic for a given value.

use crate::automorphism::{
    CentralHomDescriptor, OraclePart, RingMapDescriptor, RingMapVariant, StandardTriple,
};
use crate::decompose::{DecompositionReport, NormalizationTrace, ResidualCheck, Verdict};
use crate::matrix::{Matrix, MonomialMatrix};
use crate::perm::Permutation;
use crate::ring::{Dyadic, RatFun, RingElement, RingId, SkewLaurent};
use crate::suites::SuiteReport;
use crate::words::{Generator, GeneratorWord, PEquivChain, PEquivStep};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("json parse error: {0}")]
    Parse(String),
    #[error("malformed value: {0}")]
    Shape(String),
}

fn shape(msg: impl Into<String>) -> JsonError {
    JsonError::Shape(msg.into())
}

// ---------------------------------------------------------------------------
// scalars

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "ring")]
pub enum ScalarDto {
    #[serde(rename = "Q")]
    Q { num: String, den: String },
    #[serde(rename = "DYADIC")]
    Dyadic { num: String, exp: i64 },
    #[serde(rename = "RATFUN")]
    RatFun { num: Vec<String>, den: Vec<String> },
    #[serde(rename = "SKEW")]
    Skew { terms: Vec<SkewTermDto> },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SkewTermDto {
    pub tdeg: i64,
    /// Full RATFUN scalar encoding.
    pub coef: ScalarDto,
}

fn bigint_from(s: &str) -> Result<BigInt, JsonError> {
    BigInt::from_str(s).map_err(|e| shape(format!("bad integer {:?}: {}", s, e)))
}

fn ints_from(v: &[String]) -> Result<Vec<BigInt>, JsonError> {
    v.iter().map(|s| bigint_from(s)).collect()
}

fn ratfun_dto(f: &RatFun) -> ScalarDto {
    let (num, den) = f.cleared();
    ScalarDto::RatFun {
        num: num.iter().map(|c| c.to_string()).collect(),
        den: den.iter().map(|c| c.to_string()).collect(),
    }
}

fn ratfun_from_dto(dto: &ScalarDto) -> Result<RatFun, JsonError> {
    match dto {
        ScalarDto::RatFun { num, den } => {
            RatFun::from_cleared(ints_from(num)?, ints_from(den)?)
                .ok_or_else(|| shape("RATFUN denominator is zero"))
        }
        _ => Err(shape("expected a RATFUN scalar")),
    }
}

pub fn scalar_to_dto(e: &RingElement) -> ScalarDto {
    match e {
        RingElement::Q(q) => ScalarDto::Q {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        },
        RingElement::Dyadic(d) => ScalarDto::Dyadic {
            num: d.num().to_string(),
            exp: d.exp(),
        },
        RingElement::RatFun(f) => ratfun_dto(f),
        RingElement::Skew(v) => ScalarDto::Skew {
            terms: v
                .terms()
                .map(|(tdeg, coef)| SkewTermDto {
                    tdeg,
                    coef: ratfun_dto(coef),
                })
                .collect(),
        },
    }
}

pub fn scalar_from_dto(dto: &ScalarDto) -> Result<RingElement, JsonError> {
    match dto {
        ScalarDto::Q { num, den } => {
            let den = bigint_from(den)?;
            if den.is_zero() {
                return Err(shape("Q denominator is zero"));
            }
            Ok(RingElement::Q(BigRational::new(bigint_from(num)?, den)))
        }
        ScalarDto::Dyadic { num, exp } => Ok(RingElement::Dyadic(Dyadic::new(
            bigint_from(num)?,
            *exp,
        ))),
        ScalarDto::RatFun { .. } => Ok(RingElement::RatFun(ratfun_from_dto(dto)?)),
        ScalarDto::Skew { terms } => {
            let mut acc = RingElement::Skew(SkewLaurent::zero());
            for t in terms {
                let coef = ratfun_from_dto(&t.coef)?;
                acc = &acc + &RingElement::Skew(SkewLaurent::term(t.tdeg, coef));
            }
            Ok(acc)
        }
    }
}

fn dto_ring(dto: &ScalarDto) -> RingId {
    match dto {
        ScalarDto::Q { .. } => RingId::Q,
        ScalarDto::Dyadic { .. } => RingId::Dyadic,
        ScalarDto::RatFun { .. } => RingId::RatFun,
        ScalarDto::Skew { .. } => RingId::Skew,
    }
}

// ---------------------------------------------------------------------------
// plain rationals on the wire ("2", "-3/4")

fn rational_to_string(q: &BigRational) -> String {
    q.to_string()
}

fn rational_from_string(s: &str) -> Result<BigRational, JsonError> {
    match s.split_once('/') {
        Some((num, den)) => {
            let den = bigint_from(den.trim())?;
            if den.is_zero() {
                return Err(shape(format!("zero denominator in {:?}", s)));
            }
            Ok(BigRational::new(bigint_from(num.trim())?, den))
        }
        None => Ok(BigRational::from_integer(bigint_from(s.trim())?)),
    }
}

// ---------------------------------------------------------------------------
// matrices

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixDto {
    pub n: usize,
    pub ring: String,
    pub entries: Vec<Vec<ScalarDto>>,
}

fn ring_from_str(s: &str) -> Result<RingId, JsonError> {
    RingId::from_str(s).map_err(|e| shape(e.to_string()))
}

pub fn matrix_to_dto(m: &Matrix) -> MatrixDto {
    let n = m.n();
    MatrixDto {
        n,
        ring: m.ring().to_string(),
        entries: (0..n)
            .map(|i| (0..n).map(|j| scalar_to_dto(m.entry(i, j))).collect())
            .collect(),
    }
}

pub fn matrix_from_dto(dto: &MatrixDto) -> Result<Matrix, JsonError> {
    let ring = ring_from_str(&dto.ring)?;
    if dto.entries.len() != dto.n || dto.entries.iter().any(|r| r.len() != dto.n) {
        return Err(shape(format!(
            "matrix declared {0}x{0} but entries disagree",
            dto.n
        )));
    }
    let mut rows = Vec::with_capacity(dto.n);
    for r in &dto.entries {
        let mut row = Vec::with_capacity(dto.n);
        for e in r {
            if dto_ring(e) != ring {
                return Err(shape(format!(
                    "entry ring {} differs from matrix ring {}",
                    dto_ring(e),
                    ring
                )));
            }
            row.push(scalar_from_dto(e)?);
        }
        rows.push(row);
    }
    Matrix::from_rows(ring, rows).map_err(|e| shape(e.to_string()))
}

// ---------------------------------------------------------------------------
// words and chains

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub enum GeneratorDto {
    #[serde(rename = "perm")]
    Perm(Vec<usize>),
    #[serde(rename = "elem")]
    Elem { i: usize, j: usize, x: ScalarDto },
    #[serde(rename = "diag")]
    Diag(Vec<ScalarDto>),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct WordDto {
    pub n: usize,
    pub ring: String,
    pub seq: Vec<GeneratorDto>,
}

pub fn word_to_dto(w: &GeneratorWord) -> WordDto {
    WordDto {
        n: w.n(),
        ring: w.ring().to_string(),
        seq: w
            .seq()
            .iter()
            .map(|g| match g {
                Generator::Perm(p) => GeneratorDto::Perm(p.to_one_based()),
                Generator::Elem { i, j, x } => GeneratorDto::Elem {
                    i: i + 1,
                    j: j + 1,
                    x: scalar_to_dto(x),
                },
                Generator::Diag(d) => {
                    GeneratorDto::Diag(d.iter().map(scalar_to_dto).collect())
                }
            })
            .collect(),
    }
}

pub fn word_from_dto(dto: &WordDto) -> Result<GeneratorWord, JsonError> {
    let ring = ring_from_str(&dto.ring)?;
    let mut seq = Vec::with_capacity(dto.seq.len());
    for g in &dto.seq {
        seq.push(match g {
            GeneratorDto::Perm(images) => Generator::Perm(
                Permutation::from_one_based(images).map_err(|e| shape(e.to_string()))?,
            ),
            GeneratorDto::Elem { i, j, x } => {
                if *i == 0 || *j == 0 {
                    return Err(shape("elem indices are 1-based"));
                }
                Generator::Elem {
                    i: i - 1,
                    j: j - 1,
                    x: scalar_from_dto(x)?,
                }
            }
            GeneratorDto::Diag(d) => Generator::Diag(
                d.iter().map(scalar_from_dto).collect::<Result<_, _>>()?,
            ),
        });
    }
    GeneratorWord::new(dto.n, ring, seq).map_err(|e| shape(e.to_string()))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StepDto {
    pub p: WordDto,
    pub p_tilde: WordDto,
    pub q: WordDto,
    pub q_tilde: WordDto,
    pub a: MatrixDto,
    pub a_next: MatrixDto,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ChainDto {
    pub steps: Vec<StepDto>,
}

pub fn chain_to_dto(chain: &PEquivChain) -> ChainDto {
    ChainDto {
        steps: chain
            .steps
            .iter()
            .map(|s| StepDto {
                p: word_to_dto(&s.p),
                p_tilde: word_to_dto(&s.p_tilde),
                q: word_to_dto(&s.q),
                q_tilde: word_to_dto(&s.q_tilde),
                a: matrix_to_dto(&s.a),
                a_next: matrix_to_dto(&s.a_next),
            })
            .collect(),
    }
}

pub fn chain_from_dto(dto: &ChainDto) -> Result<PEquivChain, JsonError> {
    let mut steps = Vec::with_capacity(dto.steps.len());
    for s in &dto.steps {
        steps.push(PEquivStep {
            p: word_from_dto(&s.p)?,
            p_tilde: word_from_dto(&s.p_tilde)?,
            q: word_from_dto(&s.q)?,
            q_tilde: word_from_dto(&s.q_tilde)?,
            a: matrix_from_dto(&s.a)?,
            a_next: matrix_from_dto(&s.a_next)?,
        });
    }
    Ok(PEquivChain { steps })
}

// ---------------------------------------------------------------------------
// automorphism descriptions

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RingMapDto {
    pub variant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HomothetyDto {
    pub gamma: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub enum PartDto {
    #[serde(rename = "inner")]
    Inner(MatrixDto),
    #[serde(rename = "ringmap")]
    RingMap(RingMapDto),
    #[serde(rename = "homothety")]
    Homothety(HomothetyDto),
    #[serde(rename = "flip")]
    Flip {},
    #[serde(rename = "transpose")]
    Transpose {},
}

/// Composition applied right-to-left: the last list element acts first.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OracleDescriptionDto {
    pub n: usize,
    pub ring: String,
    pub compose: Vec<PartDto>,
}

fn ringmap_to_dto(c: &RingMapDescriptor) -> RingMapDto {
    match c.variant() {
        RingMapVariant::Identity => RingMapDto {
            variant: "identity".into(),
            a: None,
            b: None,
        },
        RingMapVariant::Affine { a, b } => RingMapDto {
            variant: "affine".into(),
            a: Some(rational_to_string(a)),
            b: Some(rational_to_string(b)),
        },
    }
}

fn ringmap_from_dto(ring: RingId, dto: &RingMapDto) -> Result<RingMapDescriptor, JsonError> {
    match dto.variant.as_str() {
        "identity" => Ok(RingMapDescriptor::identity(ring)),
        "affine" => {
            let a = dto
                .a
                .as_deref()
                .ok_or_else(|| shape("affine ringmap needs \"a\""))?;
            let b = dto.b.as_deref().unwrap_or("0");
            RingMapDescriptor::affine(ring, rational_from_string(a)?, rational_from_string(b)?)
                .map_err(|e| shape(e.to_string()))
        }
        v => Err(shape(format!("unknown ringmap variant {:?}", v))),
    }
}

fn homothety_to_dto(h: &CentralHomDescriptor) -> HomothetyDto {
    HomothetyDto {
        gamma: h
            .gamma()
            .iter()
            .map(|(p, v)| (p.to_string(), rational_to_string(v)))
            .collect(),
    }
}

fn homothety_from_dto(ring: RingId, dto: &HomothetyDto) -> Result<CentralHomDescriptor, JsonError> {
    let mut gamma = BTreeMap::new();
    for (p, v) in &dto.gamma {
        let prime: u64 = p
            .parse()
            .map_err(|e| shape(format!("bad prime key {:?}: {}", p, e)))?;
        gamma.insert(prime, rational_from_string(v)?);
    }
    CentralHomDescriptor::new(ring, gamma).map_err(|e| shape(e.to_string()))
}

pub fn parts_to_description(n: usize, ring: RingId, parts: &[OraclePart]) -> OracleDescriptionDto {
    OracleDescriptionDto {
        n,
        ring: ring.to_string(),
        compose: parts
            .iter()
            .map(|p| match p {
                OraclePart::Inner(m) => PartDto::Inner(matrix_to_dto(&m.to_matrix())),
                OraclePart::RingMap(c) => PartDto::RingMap(ringmap_to_dto(c)),
                OraclePart::Homothety(h) => PartDto::Homothety(homothety_to_dto(h)),
                OraclePart::Flip => PartDto::Flip {},
                OraclePart::Transpose => PartDto::Transpose {},
            })
            .collect(),
    }
}

pub fn description_to_parts(
    dto: &OracleDescriptionDto,
) -> Result<(usize, RingId, Vec<OraclePart>), JsonError> {
    let ring = ring_from_str(&dto.ring)?;
    if dto.n < 3 {
        return Err(shape(format!("n must be >= 3, got {}", dto.n)));
    }
    let mut parts = Vec::with_capacity(dto.compose.len());
    for p in &dto.compose {
        parts.push(match p {
            PartDto::Inner(m) => {
                let m = matrix_from_dto(m)?;
                if m.ring() != ring || m.n() != dto.n {
                    return Err(shape("inner part does not match the description header"));
                }
                OraclePart::Inner(
                    m.monomial_recognize()
                        .map_err(|e| shape(format!("inner part: {}", e)))?,
                )
            }
            PartDto::RingMap(c) => OraclePart::RingMap(ringmap_from_dto(ring, c)?),
            PartDto::Homothety(h) => OraclePart::Homothety(homothety_from_dto(ring, h)?),
            PartDto::Flip {} => OraclePart::Flip,
            PartDto::Transpose {} => OraclePart::Transpose,
        });
    }
    Ok((dto.n, ring, parts))
}

// ---------------------------------------------------------------------------
// triples and decomposition reports

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MonomialDto {
    pub diag: Vec<ScalarDto>,
    pub perm: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TripleDto {
    pub m: MonomialDto,
    pub c: RingMapDto,
    pub lambda: HomothetyDto,
}

pub fn triple_to_dto(t: &StandardTriple) -> TripleDto {
    TripleDto {
        m: MonomialDto {
            diag: t.m.diag().iter().map(scalar_to_dto).collect(),
            perm: t.m.perm().to_one_based(),
        },
        c: ringmap_to_dto(&t.c),
        lambda: homothety_to_dto(&t.lambda),
    }
}

pub fn triple_from_dto(ring: RingId, dto: &TripleDto) -> Result<StandardTriple, JsonError> {
    let diag: Vec<RingElement> = dto
        .m
        .diag
        .iter()
        .map(scalar_from_dto)
        .collect::<Result<_, _>>()?;
    let perm = Permutation::from_one_based(&dto.m.perm).map_err(|e| shape(e.to_string()))?;
    let m = MonomialMatrix::new(diag, perm).map_err(|e| shape(e.to_string()))?;
    Ok(StandardTriple {
        m,
        c: ringmap_from_dto(ring, &dto.c)?,
        lambda: homothety_from_dto(ring, &dto.lambda)?,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub enum VerdictDto {
    #[serde(rename = "OK")]
    Ok,
    NotAutomorphism {
        stage: String,
        reason: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<MatrixDto>,
    },
    UnfittableRingMap {
        detail: String,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TraceDto {
    pub sigma_k: Vec<usize>,
    pub rho: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau6: Option<Vec<usize>>,
    pub t: Vec<String>,
    pub beta: Option<String>,
    pub nu: BTreeMap<String, String>,
    pub xi_eta: BTreeMap<String, (String, String)>,
    pub c: BTreeMap<String, String>,
    pub gamma: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ResidualDto {
    pub word: WordDto,
    pub equal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<MatrixDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<MatrixDto>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ReportDto {
    pub verdict: VerdictDto,
    pub triple: Option<TripleDto>,
    pub trace: TraceDto,
    pub residuals: Vec<ResidualDto>,
    pub queries: u64,
    pub n: usize,
    pub ring: String,
}

fn trace_to_dto(trace: &NormalizationTrace) -> TraceDto {
    let pairs = |v: &[(RingElement, RingElement)]| -> BTreeMap<String, String> {
        v.iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect()
    };
    TraceDto {
        sigma_k: trace.sigma_k.to_one_based(),
        rho: trace.rho.to_one_based(),
        tau6: trace.tau6.as_ref().map(|p| p.to_one_based()),
        t: trace.t_correction.iter().map(|e| e.to_string()).collect(),
        beta: trace.beta.as_ref().map(|b| b.to_string()),
        nu: pairs(&trace.nu_samples),
        xi_eta: trace
            .xi_eta_samples
            .iter()
            .map(|(x, (xi, eta))| (x.to_string(), (xi.to_string(), eta.to_string())))
            .collect(),
        c: pairs(&trace.c_samples),
        gamma: pairs(&trace.gamma_samples),
    }
}

fn residual_to_dto(r: &ResidualCheck) -> ResidualDto {
    ResidualDto {
        word: word_to_dto(&r.word),
        equal: r.equal,
        lhs: (!r.equal).then(|| matrix_to_dto(&r.lhs)),
        rhs: (!r.equal).then(|| matrix_to_dto(&r.rhs)),
    }
}

pub fn report_to_dto(report: &DecompositionReport) -> ReportDto {
    ReportDto {
        verdict: match &report.verdict {
            Verdict::Ok => VerdictDto::Ok,
            Verdict::NotAutomorphism {
                stage,
                reason,
                witness,
            } => VerdictDto::NotAutomorphism {
                stage: stage.clone(),
                reason: reason.clone(),
                witness: witness.as_ref().map(matrix_to_dto),
            },
            Verdict::UnfittableRingMap { detail } => VerdictDto::UnfittableRingMap {
                detail: detail.clone(),
            },
        },
        triple: report.triple.as_ref().map(triple_to_dto),
        trace: trace_to_dto(&report.trace),
        residuals: report.residuals.iter().map(residual_to_dto).collect(),
        queries: report.query_count,
        n: report.n,
        ring: report.ring.to_string(),
    }
}

// ---------------------------------------------------------------------------
// suite reports

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SuiteReportDto {
    pub suite: String,
    pub title: String,
    pub ring: String,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub passed: bool,
    pub counterexample: Option<String>,
}

pub fn suite_report_to_dto(report: &SuiteReport) -> SuiteReportDto {
    SuiteReportDto {
        suite: report.suite.clone(),
        title: report.title.to_string(),
        ring: report.ring.to_string(),
        n: report.n,
        trials: report.trials,
        seed: report.seed,
        passed: report.passed,
        counterexample: report.counterexample.clone(),
    }
}

// ---------------------------------------------------------------------------
// string entry points

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("DTOs serialize infallibly");
    out.push('\n');
    out
}

pub fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, JsonError> {
    serde_json::from_str(text).map_err(|e| JsonError::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::{random_parts, random_triple};
    use crate::sample;
    use crate::words::random_word;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use serde_json::{json, Value};

    fn roundtrip_scalar(e: &RingElement) {
        let dto = scalar_to_dto(e);
        let back = scalar_from_dto(&dto).unwrap();
        assert_eq!(&back, e, "scalar roundtrip for {}", e);
    }

    #[test]
    fn scalar_encodings_match_the_documented_shapes() {
        let q = RingElement::from_ratio(RingId::Q, -3, 4).unwrap();
        let v: Value = serde_json::from_str(&to_json(&scalar_to_dto(&q))).unwrap();
        assert_eq!(v, json!({"ring":"Q","num":"-3","den":"4"}));

        let d = &RingElement::from_int(RingId::Dyadic, 5)
            * &RingElement::half(RingId::Dyadic).pow(3).unwrap();
        let v: Value = serde_json::from_str(&to_json(&scalar_to_dto(&d))).unwrap();
        assert_eq!(v, json!({"ring":"DYADIC","num":"5","exp":-3}));

        let s = RingElement::var_s(RingId::RatFun).unwrap();
        let v: Value = serde_json::from_str(&to_json(&scalar_to_dto(&s))).unwrap();
        assert_eq!(v, json!({"ring":"RATFUN","num":["0","1"],"den":["1"]}));

        let t_inv = RingElement::var_t(RingId::Skew).unwrap().try_invert().unwrap();
        let v: Value = serde_json::from_str(&to_json(&scalar_to_dto(&t_inv))).unwrap();
        assert_eq!(
            v,
            json!({"ring":"SKEW","terms":[
                {"tdeg":-1,"coef":{"ring":"RATFUN","num":["1"],"den":["1"]}}
            ]})
        );
    }

    #[test]
    fn scalars_roundtrip_across_all_rings() {
        for ring in RingId::ALL {
            for e in sample::positive_pool(ring) {
                roundtrip_scalar(&e);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            for _ in 0..20 {
                roundtrip_scalar(&sample::random_positive_unit(ring, &mut rng));
            }
        }
        // negative and non-unit values
        roundtrip_scalar(&RingElement::from_ratio(RingId::Q, -7, 3).unwrap());
        roundtrip_scalar(&RingElement::from_int(RingId::Dyadic, -12));
        let s = RingElement::var_s(RingId::RatFun).unwrap();
        let fraction = &(&s + &RingElement::one(RingId::RatFun))
            * &s.try_invert().unwrap();
        roundtrip_scalar(&fraction);
        let st = &RingElement::var_s(RingId::Skew).unwrap()
            + &RingElement::var_t(RingId::Skew).unwrap();
        roundtrip_scalar(&st);
    }

    #[test]
    fn matrices_roundtrip_and_validate() {
        for ring in RingId::ALL {
            let w = random_word(3, ring, 5, 11);
            let m = w.eval();
            let dto = matrix_to_dto(&m);
            assert_eq!(matrix_from_dto(&dto).unwrap(), m);
        }
        let mut dto = matrix_to_dto(&Matrix::identity(RingId::Q, 3));
        dto.entries[0].pop();
        assert!(matrix_from_dto(&dto).is_err());
        let mut dto = matrix_to_dto(&Matrix::identity(RingId::Q, 3));
        dto.entries[0][0] = ScalarDto::Dyadic {
            num: "1".into(),
            exp: 0,
        };
        assert!(matrix_from_dto(&dto).is_err());
    }

    #[test]
    fn words_use_one_based_indices_on_the_wire() {
        let w = GeneratorWord::new(
            3,
            RingId::Q,
            vec![
                Generator::Perm(Permutation::transposition(3, 0, 1)),
                Generator::Elem {
                    i: 0,
                    j: 1,
                    x: RingElement::from_int(RingId::Q, 2),
                },
                Generator::Diag(vec![
                    RingElement::from_int(RingId::Q, 2),
                    RingElement::one(RingId::Q),
                    RingElement::one(RingId::Q),
                ]),
            ],
        )
        .unwrap();
        let v: Value = serde_json::from_str(&to_json(&word_to_dto(&w))).unwrap();
        assert_eq!(v["seq"][0], json!({"perm":[2,1,3]}));
        assert_eq!(v["seq"][1]["elem"]["i"], json!(1));
        assert_eq!(v["seq"][1]["elem"]["j"], json!(2));
        assert_eq!(word_from_dto(&from_json(&to_json(&word_to_dto(&w))).unwrap()).unwrap(), w);
    }

    #[test]
    fn words_roundtrip_across_rings() {
        for ring in RingId::ALL {
            for seed in [1u64, 2, 3] {
                let w = random_word(4, ring, 6, seed);
                let dto = word_to_dto(&w);
                let back = word_from_dto(&from_json(&to_json(&dto)).unwrap()).unwrap();
                assert_eq!(back, w);
                assert_eq!(back.eval(), w.eval());
            }
        }
    }

    #[test]
    fn oracle_description_matches_the_documented_shape() {
        let desc: OracleDescriptionDto = from_json(
            r#"{
              "n": 3,
              "ring": "Q",
              "compose": [
                {"inner": {"n":3,"ring":"Q","entries":[
                  [{"ring":"Q","num":"0","den":"1"},{"ring":"Q","num":"1","den":"1"},{"ring":"Q","num":"0","den":"1"}],
                  [{"ring":"Q","num":"1","den":"1"},{"ring":"Q","num":"0","den":"1"},{"ring":"Q","num":"0","den":"1"}],
                  [{"ring":"Q","num":"0","den":"1"},{"ring":"Q","num":"0","den":"1"},{"ring":"Q","num":"1","den":"1"}]
                ]}},
                {"homothety": {"gamma": {"2": "3"}}}
              ]
            }"#,
        )
        .unwrap();
        let (n, ring, parts) = description_to_parts(&desc).unwrap();
        assert_eq!((n, ring, parts.len()), (3, RingId::Q, 2));
        assert!(matches!(parts[0], OraclePart::Inner(_)));
        assert!(matches!(parts[1], OraclePart::Homothety(_)));
        // and the affine ringmap shape
        let desc: OracleDescriptionDto = from_json(
            r#"{"n":3,"ring":"RATFUN","compose":[{"ringmap":{"variant":"affine","a":"2","b":"0"}}]}"#,
        )
        .unwrap();
        let (_, _, parts) = description_to_parts(&desc).unwrap();
        match &parts[0] {
            OraclePart::RingMap(c) => {
                let s = RingElement::var_s(RingId::RatFun).unwrap();
                let two_s = &RingElement::from_int(RingId::RatFun, 2) * &s;
                assert_eq!(c.apply(&s), two_s);
            }
            p => panic!("unexpected part {:?}", p),
        }
    }

    #[test]
    fn descriptions_roundtrip_for_random_parts() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for ring in RingId::ALL {
            let parts = random_parts(&mut rng, 3, ring, 3);
            let dto = parts_to_description(3, ring, &parts);
            let text = to_json(&dto);
            let back: OracleDescriptionDto = from_json(&text).unwrap();
            let (n2, ring2, parts2) = description_to_parts(&back).unwrap();
            assert_eq!((n2, ring2), (3, ring));
            // parts carry no PartialEq; compare through serialization
            assert_eq!(to_json(&parts_to_description(3, ring, &parts2)), text);
        }
    }

    #[test]
    fn fault_parts_serialize_with_their_own_tags() {
        let dto = parts_to_description(3, RingId::Q, &[OraclePart::Flip, OraclePart::Transpose]);
        let v: Value = serde_json::from_str(&to_json(&dto)).unwrap();
        assert_eq!(v["compose"][0], json!({"flip":{}}));
        assert_eq!(v["compose"][1], json!({"transpose":{}}));
        let back: OracleDescriptionDto = from_json(&to_json(&dto)).unwrap();
        let (_, _, parts) = description_to_parts(&back).unwrap();
        assert!(matches!(parts[0], OraclePart::Flip));
        assert!(matches!(parts[1], OraclePart::Transpose));
    }

    #[test]
    fn triples_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for ring in RingId::ALL {
            let t = random_triple(&mut rng, 4, ring);
            let dto = triple_to_dto(&t);
            let back = triple_from_dto(ring, &from_json(&to_json(&dto)).unwrap()).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn report_json_has_the_documented_keys() {
        use crate::automorphism::oracle_from_triple;
        use crate::decompose::{decompose, PipelineConfig};
        let t = random_triple(&mut ChaCha8Rng::seed_from_u64(3), 3, RingId::Q);
        let oracle = oracle_from_triple(&t).unwrap();
        let config = PipelineConfig {
            word_count: 3,
            ..PipelineConfig::default()
        };
        let report = decompose(&oracle, &config);
        let v: Value = serde_json::from_str(&to_json(&report_to_dto(&report))).unwrap();
        assert_eq!(v["verdict"], json!("OK"));
        assert!(v["triple"].is_object());
        assert_eq!(v["trace"]["beta"], json!("1"));
        assert_eq!(v["trace"]["nu"]["2"], json!("2"));
        assert!(v["residuals"].as_array().unwrap().len() == 3);
        assert!(v["residuals"][0]["equal"].as_bool().unwrap());
        assert!(v["queries"].as_u64().unwrap() > 0);

        // rejection reports carry stage/reason/witness
        let flip = crate::automorphism::oracle_from_parts(
            3,
            RingId::Q,
            vec![crate::automorphism::OraclePart::Flip],
        )
        .unwrap();
        let report = decompose(&flip, &config);
        let v: Value = serde_json::from_str(&to_json(&report_to_dto(&report))).unwrap();
        assert_eq!(v["verdict"]["NotAutomorphism"]["stage"], json!("extract_c"));
        assert!(v["verdict"]["NotAutomorphism"]["reason"]
            .as_str()
            .unwrap()
            .contains("flip case"));
        assert!(v["verdict"]["NotAutomorphism"]["witness"].is_object());
    }

    #[test]
    fn serialization_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let parts = random_parts(&mut rng, 3, RingId::RatFun, 4);
        let a = to_json(&parts_to_description(3, RingId::RatFun, &parts));
        let b = to_json(&parts_to_description(3, RingId::RatFun, &parts));
        assert_eq!(a, b);
    }

    #[test]
    fn chains_roundtrip() {
        use crate::words::factor_monomial;
        let m = crate::automorphism::random_monomial(
            &mut ChaCha8Rng::seed_from_u64(4),
            3,
            RingId::Q,
        );
        let w = factor_monomial(&m);
        let a = m.to_matrix();
        let step = PEquivStep {
            p: w.clone(),
            p_tilde: w.clone(),
            q: w.clone(),
            q_tilde: w.clone(),
            a: a.clone(),
            a_next: a.clone(),
        };
        let chain = PEquivChain { steps: vec![step] };
        let dto = chain_to_dto(&chain);
        let back = chain_from_dto(&from_json(&to_json(&dto)).unwrap()).unwrap();
        assert_eq!(back.steps.len(), 1);
        assert_eq!(back.steps[0].a, a);
        assert_eq!(back.steps[0].p, w);
    }
}
