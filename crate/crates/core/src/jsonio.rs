//! The JSON wire formats: rationals are "p/q" strings with decimal integer
//! parts, polynomials carry monomial coefficients (i <= j), matrices are
//! row-major string grids. Everything round-trips exactly.

use serde::{Deserialize, Serialize};

use crate::algebra::{LinearConstraint, QuadPoly, RatMatrix};
use crate::engine::general::{DiscreteDist, ProductDist};
use crate::engine::histogram::AtomHistogram;
use crate::engine::DyadicProb;
use crate::error::{Error, Result};
use crate::num::{format_rational, parse_rational, Rational};

#[derive(Serialize, Deserialize)]
pub struct QuadPolyDto {
    pub n: usize,
    /// Monomial coefficients `[i, j, "p/q"]` with i <= j; the coefficient of
    /// x_i x_j for i < j is the monomial coefficient `2 A[i,j]`.
    pub quad: Vec<(usize, usize, String)>,
    /// Full linear coefficient vector, length n (or empty for zero).
    pub lin: Vec<String>,
    #[serde(rename = "const")]
    pub constant: String,
}

pub fn poly_to_json(q: &QuadPoly) -> String {
    let mut quad = Vec::new();
    for i in 0..q.n() {
        for j in i..q.n() {
            let c = q.monomial_coeff(i, j);
            if !num_traits::Zero::is_zero(&c) {
                quad.push((i, j, format_rational(&c)));
            }
        }
    }
    let dto = QuadPolyDto {
        n: q.n(),
        quad,
        lin: q.linear().iter().map(format_rational).collect(),
        constant: format_rational(q.constant_term()),
    };
    serde_json::to_string_pretty(&dto).expect("serializable")
}

pub fn poly_from_json(text: &str) -> Result<QuadPoly> {
    let dto: QuadPolyDto = serde_json::from_str(text)?;
    let quad: Vec<(usize, usize, Rational)> = dto
        .quad
        .iter()
        .map(|(i, j, s)| Ok((*i, *j, parse_rational(s)?)))
        .collect::<Result<_>>()?;
    if !dto.lin.is_empty() && dto.lin.len() != dto.n {
        return Err(Error::Parse(format!(
            "linear part has length {}, expected {} (or empty)",
            dto.lin.len(),
            dto.n
        )));
    }
    let lin: Vec<(usize, Rational)> = dto
        .lin
        .iter()
        .enumerate()
        .map(|(i, s)| Ok((i, parse_rational(s)?)))
        .collect::<Result<_>>()?;
    QuadPoly::from_monomials(dto.n, &quad, &lin, parse_rational(&dto.constant)?)
}

#[derive(Serialize, Deserialize)]
pub struct MatrixDto {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

pub fn matrix_to_json(m: &RatMatrix) -> String {
    serde_json::to_string_pretty(&matrix_to_dto(m)).expect("serializable")
}

pub fn matrix_to_dto(m: &RatMatrix) -> MatrixDto {
    MatrixDto {
        rows: m.rows(),
        cols: m.cols(),
        entries: (0..m.rows())
            .map(|i| m.row(i).iter().map(format_rational).collect())
            .collect(),
    }
}

pub fn matrix_from_dto(dto: &MatrixDto) -> Result<RatMatrix> {
    if dto.entries.len() != dto.rows || dto.entries.iter().any(|r| r.len() != dto.cols) {
        return Err(Error::Parse(format!(
            "entry grid does not match {}x{}",
            dto.rows, dto.cols
        )));
    }
    if dto.rows == 0 {
        return Ok(RatMatrix::empty(dto.cols));
    }
    let rows: Vec<Vec<Rational>> = dto
        .entries
        .iter()
        .map(|row| row.iter().map(|s| parse_rational(s)).collect())
        .collect::<Result<_>>()?;
    RatMatrix::from_rows(rows)
}

pub fn matrix_from_json(text: &str) -> Result<RatMatrix> {
    matrix_from_dto(&serde_json::from_str(text)?)
}

/// {"m": matrix, "w": ["p/q", ...]}.
#[derive(Serialize, Deserialize)]
pub struct ConstraintDto {
    pub m: MatrixDto,
    pub w: Vec<String>,
}

pub fn constraint_from_json(text: &str) -> Result<LinearConstraint> {
    let dto: ConstraintDto = serde_json::from_str(text)?;
    let m = matrix_from_dto(&dto.m)?;
    let w = dto
        .w
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<_>>()?;
    LinearConstraint::new(m, w)
}

#[derive(Serialize, Deserialize)]
pub struct DistDto {
    pub atoms: Vec<(String, String)>,
}

pub fn dist_from_dto(dto: &DistDto) -> Result<DiscreteDist> {
    let atoms = dto
        .atoms
        .iter()
        .map(|(v, p)| Ok((parse_rational(v)?, parse_rational(p)?)))
        .collect::<Result<_>>()?;
    DiscreteDist::new(atoms)
}

pub fn dist_to_dto(d: &DiscreteDist) -> DistDto {
    DistDto {
        atoms: d
            .atoms()
            .iter()
            .map(|(v, p)| (format_rational(v), format_rational(p)))
            .collect(),
    }
}

pub fn dist_from_json(text: &str) -> Result<DiscreteDist> {
    dist_from_dto(&serde_json::from_str(text)?)
}

/// {"factors": [dist, ...]}.
#[derive(Serialize, Deserialize)]
pub struct ProductDistDto {
    pub factors: Vec<DistDto>,
}

pub fn product_dist_from_json(text: &str) -> Result<ProductDist> {
    let dto: ProductDistDto = serde_json::from_str(text)?;
    let factors = dto
        .factors
        .iter()
        .map(dist_from_dto)
        .collect::<Result<_>>()?;
    Ok(ProductDist::new(factors))
}

/// {"event", "count", "total", "prob"} for exact event probabilities.
#[derive(Serialize, Deserialize)]
pub struct EventResultDto {
    pub event: String,
    pub count: String,
    pub total: String,
    pub prob: String,
}

pub fn event_result(event: &str, p: &DyadicProb) -> EventResultDto {
    EventResultDto {
        event: event.to_string(),
        count: p.count().to_string(),
        total: p.total().to_string(),
        prob: format_rational(&p.to_rational()),
    }
}

/// Histograms serialize as sorted [["value", "count"], ...].
#[derive(Serialize, Deserialize)]
pub struct HistogramDto {
    pub event: String,
    pub total: String,
    pub atoms: Vec<(String, String)>,
}

pub fn histogram_to_dto(event: &str, h: &AtomHistogram) -> HistogramDto {
    HistogramDto {
        event: event.to_string(),
        total: h.total.to_string(),
        atoms: h
            .atoms
            .iter()
            .map(|(v, c)| (format_rational(v), c.to_string()))
            .collect(),
    }
}

/// {"name", "log2", "clamped"} for closed-form bounds.
#[derive(Serialize, Deserialize)]
pub struct BoundDto {
    pub name: String,
    pub log2: String,
    pub clamped: bool,
}

pub fn bound_to_dto(name: &str, b: &crate::bounds::LogBound) -> BoundDto {
    BoundDto {
        name: name.to_string(),
        log2: format!("{:.20}", b.log2_f64_upper()),
        clamped: b.clamped(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, ratio};

    #[test]
    fn poly_round_trip() {
        let q = QuadPoly::from_monomials(
            3,
            &[(0, 0, ratio(1, 3)), (0, 2, rat(-2))],
            &[(1, ratio(5, 7))],
            rat(4),
        )
        .unwrap();
        let again = poly_from_json(&poly_to_json(&q)).unwrap();
        assert_eq!(q, again);
    }

    #[test]
    fn poly_off_diagonal_convention() {
        // monomial coefficient 1 on x1 x2 stores as A[0,1] = A[1,0] = 1/2
        let text = r#"{"n": 2, "quad": [[0, 1, "1"]], "lin": [], "const": "0"}"#;
        let q = poly_from_json(text).unwrap();
        assert_eq!(q.quad_matrix()[(0, 1)], ratio(1, 2));
        assert_eq!(q.monomial_coeff(0, 1), rat(1));
    }

    #[test]
    fn matrix_round_trip_including_empty() {
        for m in [
            RatMatrix::from_i64(&[&[1, 2], &[3, 4]]),
            RatMatrix::empty(3),
        ] {
            let again = matrix_from_json(&matrix_to_json(&m)).unwrap();
            assert_eq!(m, again);
        }
    }

    #[test]
    fn dist_round_trip() {
        let d =
            DiscreteDist::new(vec![(ratio(-1, 2), ratio(1, 4)), (rat(3), ratio(3, 4))]).unwrap();
        let text = serde_json::to_string(&dist_to_dto(&d)).unwrap();
        let again = dist_from_json(&text).unwrap();
        assert_eq!(d, again);
    }
}
