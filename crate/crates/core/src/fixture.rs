//! Seeded generators of test hypersurfaces with nodes at coordinate points.
//!
//! A node at `e_c` (the coordinate point of `x_c`) is imposed by linear
//! conditions: no monomial may contain `x_c` to a power above `d-2`, and the
//! coefficients of `x_c^{d-2}·x_i^2` (the diagonal of the local quadratic
//! part) are nonzero. Every draw is certified with [`certify_nodal`] and
//! redrawn from the same stream until the verdict is `Nodal(m)`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{PrimeField, Rationals, DEFAULT_PRIMES};
use crate::milnor::JacobianContext;
use crate::monomial::{check_vars, monomials_of_degree, Monomial};
use crate::nodal::{certify_nodal, ProjectivePoint, Verdict};
use crate::parse::{parse_points, parse_rational_polynomial};
use crate::poly::{fermat, HomogeneousPolynomial};

/// Draws after which generation gives up.
pub const MAX_ATTEMPTS: usize = 32;

/// Which monomials receive random coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    /// Every monomial compatible with the nodes.
    Dense,
    /// Powers `x_i^j` of single free variables times monomials in the node
    /// coordinates, plus monomials in the node coordinates alone. Gröbner
    /// computations on these stay small in five and more dimensions.
    Diagonal,
}

impl Support {
    /// Dense up to `n = 4`, diagonal above.
    pub fn default_for(n: usize) -> Self {
        if n <= 4 {
            Support::Dense
        } else {
            Support::Diagonal
        }
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Support::Dense => "dense",
            Support::Diagonal => "diagonal",
        })
    }
}

impl FromStr for Support {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Support::Dense),
            "diagonal" => Ok(Support::Diagonal),
            _ => Err(Error::Invalid(format!("unknown support {s:?} (expected dense or diagonal)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixtureKind {
    Fermat {
        n: usize,
        d: u32,
    },
    OneNode {
        n: usize,
        d: u32,
        seed: u64,
        support: Support,
    },
    MultiNode {
        n: usize,
        d: u32,
        m: usize,
        seed: u64,
        support: Support,
    },
    FromFile {
        path: PathBuf,
        points_path: Option<PathBuf>,
    },
}

impl FixtureKind {
    pub fn one_node(n: usize, d: u32, seed: u64) -> Self {
        FixtureKind::OneNode {
            n,
            d,
            seed,
            support: Support::default_for(n),
        }
    }

    pub fn multi_node(n: usize, d: u32, m: usize, seed: u64) -> Self {
        FixtureKind::MultiNode {
            n,
            d,
            m,
            seed,
            support: Support::default_for(n),
        }
    }
}

impl fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureKind::Fermat { n, d } => write!(f, "fermat({n},{d})"),
            FixtureKind::OneNode { n, d, seed, support } => write!(f, "one_node({n},{d},{seed},{support})"),
            FixtureKind::MultiNode {
                n,
                d,
                m,
                seed,
                support,
            } => write!(f, "multi_node({n},{d},{m},{seed},{support})"),
            FixtureKind::FromFile { path, .. } => write!(f, "file({})", path.display()),
        }
    }
}

/// A generated or loaded hypersurface with its declared nodes.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub kind: FixtureKind,
    pub f: HomogeneousPolynomial<Rationals>,
    pub points: Vec<ProjectivePoint>,
    /// Draws consumed, 1 for deterministic kinds.
    pub attempts: usize,
}

impl Fixture {
    pub fn n(&self) -> usize {
        self.f.ambient_dim()
    }

    pub fn d(&self) -> u32 {
        self.f.degree()
    }

    pub fn points_text(&self) -> String {
        self.points.iter().map(|p| format!("{p}\n")).collect()
    }
}

fn check_parameters(n: usize, d: u32, m: usize) -> Result<()> {
    check_vars(n + 1)?;
    if d < 3 {
        return Err(Error::DegreeTooSmall {
            message: format!("nodal fixtures need d >= 3, got {d}"),
        });
    }
    if n < 1 || m > n {
        return Err(Error::Invalid(format!("cannot place {m} nodes in P^{n}")));
    }
    Ok(())
}

fn random_coefficient(rng: &mut ChaCha8Rng, nonzero: bool) -> i64 {
    loop {
        let c: i64 = rng.gen_range(-9..=9);
        if c != 0 || !nonzero {
            return c;
        }
    }
}

/// One draw of a degree-`d` form in `n+1` variables, singular at the last
/// `m` coordinate points with full-rank quadratic parts there.
fn draw(n: usize, d: u32, m: usize, support: Support, rng: &mut ChaCha8Rng) -> HomogeneousPolynomial<Rationals> {
    let nvars = n + 1;
    let centers: Vec<usize> = (nvars - m..nvars).collect();
    let is_center = |i: usize| i >= nvars - m;
    let allowed = |a: &Monomial| centers.iter().all(|&c| a.exponent(c) + 2 <= d);
    // coefficients of x_c^{d-2}·x_i^2 with i != c
    let forced = |a: &Monomial| {
        centers.iter().any(|&c| {
            a.exponent(c) == d - 2 && (0..nvars).any(|i| i != c && a.exponent(i) == 2)
        })
    };
    let in_support = |a: &Monomial| match support {
        Support::Dense => true,
        Support::Diagonal => {
            let free: Vec<usize> = (0..nvars).filter(|&i| !is_center(i) && a.exponent(i) > 0).collect();
            free.len() <= 1
        }
    };
    let mut terms = Vec::new();
    for a in monomials_of_degree(nvars, d) {
        if !allowed(&a) {
            continue;
        }
        let free_power = (0..nvars).any(|i| !is_center(i) && a.exponent(i) == d);
        let c = if forced(&a) || free_power {
            random_coefficient(rng, true)
        } else if in_support(&a) {
            random_coefficient(rng, false)
        } else {
            0
        };
        if c != 0 {
            terms.push((a, BigRational::from_integer(BigInt::from(c))));
        }
    }
    HomogeneousPolynomial::from_terms(&Rationals, nvars, d, terms).expect("terms of one degree")
}

/// Draws until the node set certifies over the first default prime.
pub fn multi_node(n: usize, d: u32, m: usize, seed: u64, support: Support) -> Result<Fixture> {
    check_parameters(n, d, m)?;
    let nvars = n + 1;
    let points: Vec<ProjectivePoint> = (nvars - m..nvars).rev().map(|c| ProjectivePoint::coordinate(nvars, c)).collect();
    let field = PrimeField::new(DEFAULT_PRIMES[0])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::new();
    for attempt in 1..=MAX_ATTEMPTS {
        let f = draw(n, d, m, support, &mut rng);
        let ctx = JacobianContext::new(f.reduce_into(&field)?)?;
        let cert = certify_nodal(&ctx, &points)?;
        if cert.verdict == Verdict::Nodal(m) {
            let kind = if m == 1 {
                FixtureKind::OneNode { n, d, seed, support }
            } else {
                FixtureKind::MultiNode {
                    n,
                    d,
                    m,
                    seed,
                    support,
                }
            };
            return Ok(Fixture {
                kind,
                f,
                points,
                attempts: attempt,
            });
        }
        last = cert.verdict.to_string();
    }
    Err(Error::FixtureGeneration {
        attempts: MAX_ATTEMPTS,
        reason: last,
    })
}

pub fn one_node(n: usize, d: u32, seed: u64, support: Support) -> Result<Fixture> {
    multi_node(n, d, 1, seed, support)
}

pub fn fermat_fixture(n: usize, d: u32) -> Result<Fixture> {
    check_vars(n + 1)?;
    Ok(Fixture {
        kind: FixtureKind::Fermat { n, d },
        f: fermat(&Rationals, n, d),
        points: Vec::new(),
        attempts: 1,
    })
}

/// A polynomial file (one polynomial) and an optional points file (one
/// point per line; blank lines and lines starting with `#` are skipped).
pub fn from_file(path: PathBuf, points_path: Option<PathBuf>, n: usize) -> Result<Fixture> {
    let text = std::fs::read_to_string(&path)?;
    let points = match &points_path {
        Some(p) => Some(std::fs::read_to_string(p)?),
        None => None,
    };
    let mut fx = from_text(&text, points.as_deref(), n)?;
    fx.kind = FixtureKind::FromFile { path, points_path };
    Ok(fx)
}

/// Same as [`from_file`] on in-memory text; the kind records the path `-`.
pub fn from_text(polynomial: &str, points: Option<&str>, n: usize) -> Result<Fixture> {
    let body: String = polynomial
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join(" ");
    let f = parse_rational_polynomial(&body, n)?;
    let points = match points {
        Some(text) => parse_points(text, n)?
            .into_iter()
            .map(ProjectivePoint::new)
            .collect::<Result<_>>()?,
        None => Vec::new(),
    };
    Ok(Fixture {
        kind: FixtureKind::FromFile {
            path: PathBuf::from("-"),
            points_path: None,
        },
        f,
        points,
        attempts: 1,
    })
}

pub fn generate(kind: &FixtureKind, n_hint: usize) -> Result<Fixture> {
    match kind.clone() {
        FixtureKind::Fermat { n, d } => fermat_fixture(n, d),
        FixtureKind::OneNode { n, d, seed, support } => one_node(n, d, seed, support),
        FixtureKind::MultiNode {
            n,
            d,
            m,
            seed,
            support,
        } => multi_node(n, d, m, seed, support),
        FixtureKind::FromFile { path, points_path } => from_file(path, points_path, n_hint),
    }
}
