//! Certificates that a hypersurface is nodal: each listed point is singular
//! with a nondegenerate Hessian, and the global Tjurina count equals the
//! number of listed points.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{format_rational, Field, FieldDescriptor};
use crate::milnor::JacobianContext;
use crate::parse::parse_point;
use crate::poly::HomogeneousPolynomial;

/// A rational point of `P^n` with a coordinate known to be nonzero.
#[derive(Clone, Debug)]
pub struct ProjectivePoint {
    coordinates: Vec<BigRational>,
    chart: usize,
}

impl ProjectivePoint {
    /// Uses the first coordinate whose numerator has maximal absolute value
    /// as the chart.
    pub fn new(coordinates: Vec<BigRational>) -> Result<Self> {
        let mut chart: Option<usize> = None;
        for (i, c) in coordinates.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match chart {
                Some(j) if coordinates[j].numer().abs() >= c.numer().abs() => {}
                _ => chart = Some(i),
            }
        }
        let chart = chart.ok_or(Error::DegeneratePoint)?;
        Ok(ProjectivePoint { coordinates, chart })
    }

    pub fn with_chart(coordinates: Vec<BigRational>, chart: usize) -> Result<Self> {
        if coordinates.iter().all(Zero::is_zero) {
            return Err(Error::DegeneratePoint);
        }
        match coordinates.get(chart) {
            Some(c) if !c.is_zero() => Ok(ProjectivePoint { coordinates, chart }),
            _ => Err(Error::Invalid(format!("coordinate {chart} of the point is zero"))),
        }
    }

    /// The coordinate point `[0 : … : 1 : … : 0]` with the 1 in slot `i`.
    pub fn coordinate(nvars: usize, i: usize) -> Self {
        let mut c = vec![BigRational::zero(); nvars];
        c[i] = BigRational::from_integer(1.into());
        ProjectivePoint {
            coordinates: c,
            chart: i,
        }
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        Self::new(parse_point(text, n)?)
    }

    pub fn coordinates(&self) -> &[BigRational] {
        &self.coordinates
    }

    pub fn chart(&self) -> usize {
        self.chart
    }

    pub fn nvars(&self) -> usize {
        self.coordinates.len()
    }

    /// Equality up to a nonzero scalar.
    pub fn same_point(&self, other: &ProjectivePoint) -> bool {
        if self.nvars() != other.nvars() {
            return false;
        }
        let (a, b) = (&self.coordinates, &other.coordinates);
        (0..a.len()).all(|i| (0..i).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
    }

    /// Coordinates in `field`, scaled so that the chart coordinate is 1.
    pub fn affine_in<K: Field>(&self, field: &K) -> Result<Vec<K::Elem>> {
        let c = &self.coordinates[self.chart];
        self.coordinates.iter().map(|x| field.from_rational(&(x / c))).collect()
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coordinates.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(" : "))
    }
}

fn check_point<K: Field>(f: &HomogeneousPolynomial<K>, p: &ProjectivePoint) -> Result<()> {
    if p.nvars() != f.nvars() {
        return Err(Error::Invalid(format!(
            "point {p} has {} coordinates, expected {}",
            p.nvars(),
            f.nvars()
        )));
    }
    Ok(())
}

/// True iff every partial derivative of `f` vanishes at `p`.
pub fn is_singular_at<K: Field>(f: &HomogeneousPolynomial<K>, p: &ProjectivePoint) -> Result<bool> {
    check_point(f, p)?;
    let a = p.affine_in(f.field())?;
    Ok(f.partial_derivatives().iter().all(|g| f.field().is_zero(&g.eval(&a))))
}

/// Rank of the Hessian of `f` in the affine chart of `p`, at `p`.
pub fn hessian_rank_at<K: Field>(f: &HomogeneousPolynomial<K>, p: &ProjectivePoint) -> Result<usize> {
    if !is_singular_at(f, p)? {
        return Err(Error::NotSingular { point: p.to_string() });
    }
    let a = p.affine_in(f.field())?;
    let vars: Vec<usize> = (0..f.nvars()).filter(|&i| i != p.chart()).collect();
    let first: Vec<_> = vars.iter().map(|&i| f.partial(i)).collect();
    let rows: Vec<Vec<K::Elem>> = first
        .iter()
        .map(|g| vars.iter().map(|&j| g.partial(j).eval(&a)).collect())
        .collect();
    Ok(f.field().dense_rank(rows))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Nodal(usize),
    Smooth,
    Failed(String),
}

impl Verdict {
    pub fn is_nodal(&self) -> bool {
        matches!(self, Verdict::Nodal(_))
    }

    pub fn node_count(&self) -> Option<usize> {
        match self {
            Verdict::Nodal(m) => Some(*m),
            Verdict::Smooth => Some(0),
            Verdict::Failed(_) => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Nodal(m) => write!(f, "nodal({m})"),
            Verdict::Smooth => f.write_str("smooth"),
            Verdict::Failed(reason) => write!(f, "failed: {reason}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCheck {
    pub point: String,
    pub singular: bool,
    /// Present for singular points.
    pub hessian_rank: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodalCertificate {
    pub field: FieldDescriptor,
    pub n: usize,
    pub d: u32,
    pub per_point: Vec<PointCheck>,
    pub tjurina: Option<usize>,
    pub verdict: Verdict,
}

impl NodalCertificate {
    /// The certificate agrees with another up to the field used.
    pub fn agrees_with(&self, other: &NodalCertificate) -> bool {
        self.per_point == other.per_point && self.tjurina == other.tjurina && self.verdict == other.verdict
    }
}

/// Checks every listed point locally and compares the global Tjurina count
/// with the number of points.
pub fn certify_nodal<K: Field>(ctx: &JacobianContext<K>, points: &[ProjectivePoint]) -> Result<NodalCertificate> {
    let f = ctx.f();
    let n = ctx.n();
    ctx.register_singular_points(points);
    let mut per_point = Vec::with_capacity(points.len());
    let mut failure = None;
    for (i, p) in points.iter().enumerate() {
        let singular = is_singular_at(f, p)?;
        let hessian_rank = if singular { Some(hessian_rank_at(f, p)?) } else { None };
        if failure.is_none() {
            if !singular {
                failure = Some(format!("point {i} {p} is not singular"));
            } else if hessian_rank != Some(n) {
                failure = Some(format!(
                    "hessian rank {} < {n} at point {i} {p}",
                    hessian_rank.unwrap_or(0)
                ));
            }
        }
        per_point.push(PointCheck {
            point: p.to_string(),
            singular,
            hessian_rank,
        });
    }
    if failure.is_none() {
        'outer: for i in 0..points.len() {
            for j in 0..i {
                if points[i].same_point(&points[j]) {
                    failure = Some(format!("points {j} and {i} coincide"));
                    break 'outer;
                }
            }
        }
    }
    let tjurina = ctx.tjurina_count();
    let verdict = match (failure, &tjurina) {
        (Some(reason), _) => Verdict::Failed(reason),
        (None, Err(e)) => Verdict::Failed(e.to_string()),
        (None, Ok(0)) if points.is_empty() => Verdict::Smooth,
        (None, Ok(t)) if *t == points.len() => Verdict::Nodal(*t),
        (None, Ok(t)) => Verdict::Failed(format!("tjurina={t} but {} points listed", points.len())),
    };
    Ok(NodalCertificate {
        field: ctx.field().descriptor(),
        n,
        d: ctx.d(),
        per_point,
        tjurina: tjurina.ok(),
        verdict,
    })
}
