//! JSON formats. Matrices are row-major arrays of `[re, im]` pairs.

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::clifford::Signature;
use crate::error::{Error, Result};
use crate::kreinlin::{AntilinearOperator, KreinSpace};
use crate::linalg::Operator;
use crate::spectral::{AlgebraRep, SpectralSpacetime, SpectralTriple};

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn operator_to_json(a: &Operator) -> MatrixJson {
    (0..a.nrows()).map(|r| (0..a.ncols()).map(|k| [a[(r, k)].re, a[(r, k)].im]).collect()).collect()
}

/// Parses a square matrix; `pointer` locates it in error messages.
pub fn operator_from_json(rows: &MatrixJson, pointer: &str) -> Result<Operator> {
    let n = rows.len();
    let schema = |message: String| Error::Schema { pointer: pointer.to_string(), message };
    if n == 0 {
        return Err(schema("empty matrix".into()));
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Schema {
                pointer: format!("{pointer}/{r}"),
                message: format!("row has {} entries, expected {n}", row.len()),
            });
        }
        if row.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Schema { pointer: format!("{pointer}/{r}"), message: "non-finite entry".into() });
        }
    }
    Ok(Operator::from_fn(n, n, |r, k| Complex64::new(rows[r][k][0], rows[r][k][1])))
}

pub fn serialize_operator<S: Serializer>(a: &Operator, s: S) -> std::result::Result<S::Ok, S::Error> {
    operator_to_json(a).serialize(s)
}

pub fn deserialize_operator<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Operator, D::Error> {
    let rows = MatrixJson::deserialize(d)?;
    operator_from_json(&rows, "").map_err(serde::de::Error::custom)
}

pub fn serialize_operators<S: Serializer>(a: &[Operator], s: S) -> std::result::Result<S::Ok, S::Error> {
    a.iter().map(operator_to_json).collect::<Vec<_>>().serialize(s)
}

/// Deserializes JSON text, reporting failures with a JSON pointer to the offending value.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|err| {
        let mut pointer = String::new();
        for seg in err.path().iter() {
            use serde_path_to_error::Segment;
            match seg {
                Segment::Seq { index } => pointer.push_str(&format!("/{index}")),
                Segment::Map { key } => pointer.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
                Segment::Enum { variant } => pointer.push_str(&format!("/{variant}")),
                Segment::Unknown => pointer.push_str("/?"),
            }
        }
        Error::Schema { pointer, message: err.inner().to_string() }
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraElementJson {
    pub label: String,
    pub matrix: MatrixJson,
}

/// A full structure: Krein form, algebra basis, `D`, the matrix of `J`, `χ`, and optional
/// candidate orientation forms.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureJson {
    pub signature: Signature,
    pub ko_dim: u8,
    pub krein: MatrixJson,
    pub algebra: Vec<AlgebraElementJson>,
    pub dirac: MatrixJson,
    pub real: MatrixJson,
    pub chi: MatrixJson,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forms: Vec<MatrixJson>,
}

impl StructureJson {
    pub fn from_structure(s: &SpectralSpacetime, forms: &[Operator]) -> Self {
        StructureJson {
            signature: s.signature,
            ko_dim: s.ko_dim,
            krein: operator_to_json(s.space.j()),
            algebra: s
                .algebra
                .basis()
                .iter()
                .zip(s.algebra.labels())
                .map(|(m, l)| AlgebraElementJson { label: l.clone(), matrix: operator_to_json(m) })
                .collect(),
            dirac: operator_to_json(&s.dirac),
            real: operator_to_json(s.real.matrix()),
            chi: operator_to_json(&s.chi),
            forms: forms.iter().map(operator_to_json).collect(),
        }
    }

    /// Builds the structure; the algebra is checked for unit and closure.
    pub fn to_structure(&self) -> Result<SpectralSpacetime> {
        let j = operator_from_json(&self.krein, "/krein")?;
        let space = KreinSpace::new(j).map_err(|e| Error::Schema { pointer: "/krein".into(), message: e.to_string() })?;
        let mut basis = Vec::new();
        let mut labels = Vec::new();
        for (k, a) in self.algebra.iter().enumerate() {
            basis.push(operator_from_json(&a.matrix, &format!("/algebra/{k}/matrix"))?);
            labels.push(a.label.clone());
        }
        let algebra = AlgebraRep::new(basis, labels)
            .map_err(|e| Error::Schema { pointer: "/algebra".into(), message: e.to_string() })?;
        let dirac = operator_from_json(&self.dirac, "/dirac")?;
        let real = AntilinearOperator::new(operator_from_json(&self.real, "/real")?);
        let chi = operator_from_json(&self.chi, "/chi")?;
        SpectralSpacetime::new(space, algebra, dirac, real, chi, self.signature, self.ko_dim)
    }

    pub fn to_triple(&self) -> Result<SpectralTriple> {
        let s = self.to_structure()?;
        SpectralTriple::new(s.space, s.algebra, s.dirac, s.real, s.chi, s.ko_dim)
    }

    pub fn form_operators(&self) -> Result<Vec<Operator>> {
        self.forms
            .iter()
            .enumerate()
            .map(|(k, f)| operator_from_json(f, &format!("/forms/{k}")))
            .collect()
    }
}
