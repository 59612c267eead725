use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::deform::deform;
use super::linalg::nullspace;
use super::TransformError;
use crate::ode::{make_ode, singular_points, LinearOde, Point, SingularKind};
use crate::polyrat::rational::{serde_rat, serde_rat_vec};
use crate::polyrat::{radical, BigRat, RatPoly};

/// An apparent point to remove. Without a multiplicity, the second-order gap
/// law `gap = m + 1` is used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Target {
    #[serde(with = "serde_rat")]
    pub location: BigRat,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub multiplicity: Option<usize>,
}

impl Target {
    pub fn new(location: BigRat) -> Self {
        Target { location, multiplicity: None }
    }

    pub fn with_multiplicity(location: BigRat, m: usize) -> Self {
        Target { location, multiplicity: Some(m) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UndeformResult {
    pub ode: LinearOde,
    #[serde(with = "serde_rat_vec")]
    pub removed_points: Vec<BigRat>,
    /// Solution-space dimensions beyond the overall scale.
    pub free_parameters: usize,
}

fn resolve_targets(ode: &LinearOde, targets: Option<&[Target]>) -> Result<Vec<(BigRat, usize)>, TransformError> {
    let n = ode.order();
    let found: Vec<Target> = match targets {
        Some(t) => t.to_vec(),
        None => singular_points(ode)
            .points
            .into_iter()
            .filter(|p| p.kind == SingularKind::ApparentSingular)
            .filter_map(|p| match p.location {
                Point::Finite(x) => Some(Target::new(x)),
                Point::Infinity => None,
            })
            .collect(),
    };
    if found.is_empty() {
        return Err(TransformError::NothingToRemove);
    }
    found
        .into_iter()
        .map(|t| {
            let m = match t.multiplicity {
                Some(m) if m > 0 => m,
                Some(_) => return Err(TransformError::NotRemovable("multiplicity must be positive".into())),
                None if n == 2 => gap_multiplicity(ode, &t.location)?,
                None => return Err(TransformError::MultiplicityRequired(t.location)),
            };
            Ok((t.location, m))
        })
        .collect()
}

fn gap_multiplicity(ode: &LinearOde, q: &BigRat) -> Result<usize, TransformError> {
    let e = crate::frobenius::indicial_exponents(ode, &Point::Finite(q.clone()))
        .map_err(|err| TransformError::NotRemovable(err.to_string()))?;
    match (e.values.first(), e.values.last(), e.all_rational()) {
        (Some(lo), Some(hi), true) if (hi - lo).is_integer() && hi - lo >= BigRat::from_integer(2.into()) => {
            let gap: usize = (hi - lo).to_integer().try_into().expect("small gap");
            Ok(gap - 1)
        }
        _ => Err(TransformError::NotRemovable(format!(
            "exponents at {q} do not have an integer gap of at least 2"
        ))),
    }
}

/// Finds the equation whose deformation is `ode`, removing the given apparent
/// points (all detected ones by default).
///
/// The antecedent has `P_n = λ ∏ (z − q_j)^{m_j}` and unknown `P_0..P_{n−1}`.
/// Deformation is linear and injective in `(P_0, …, P_{n−1}, λ)` once `P_n`'s
/// roots are fixed, so `deform(antecedent) = c · ode` is a linear system whose
/// null space has dimension at most one.
pub fn undeform(ode: &LinearOde, targets: Option<&[Target]>) -> Result<UndeformResult, TransformError> {
    let n = ode.order();
    if n < 2 {
        return Err(TransformError::OrderTooLow(n));
    }
    let targets = resolve_targets(ode, targets)?;
    let pn_shape = targets.iter().fold(RatPoly::one(), |acc, (q, m)| {
        &acc * &RatPoly::linear_root(q).pow(*m)
    });
    let r = radical(&pn_shape)?;
    let s = (&r * &pn_shape.derivative())
        .exact_div(&pn_shape)
        .expect("P_n divides R P_n'");

    let qdeg = ode.coeffs().iter().filter_map(RatPoly::degree).max().unwrap_or(0);
    // Generous: the solution is unique, so extra room only costs time.
    let bound = qdeg + 1;

    // Columns: coefficients of P_0..P_{n-1} (bound + 1 each), then λ, then c.
    let ncols = n * (bound + 1) + 2;
    let mut columns: Vec<Vec<RatPoly>> = Vec::with_capacity(ncols);
    for k in 0..n {
        for i in 0..=bound {
            let mono = RatPoly::monomial(BigRat::from_integer(1.into()), i);
            let mut col = vec![RatPoly::zero(); n + 1];
            col[k] = &r * &mono;
            col[k + 1] = &(&r * &mono.derivative()) - &(&s * &mono);
            columns.push(col);
        }
    }
    let mut lambda_col = vec![RatPoly::zero(); n + 1];
    lambda_col[n] = &r * &pn_shape;
    columns.push(lambda_col);
    columns.push(ode.coeffs().iter().map(|q| -q).collect());

    let row_len: Vec<usize> = (0..=n)
        .map(|j| columns.iter().map(|c| c[j].coeffs().len()).max().unwrap_or(0))
        .collect();
    let mut rows = Vec::new();
    for (j, &len) in row_len.iter().enumerate() {
        for d in 0..len {
            rows.push(columns.iter().map(|c| c[j].coeff(d)).collect::<Vec<_>>());
        }
    }

    let basis = nullspace(rows, ncols);
    let removed: Vec<BigRat> = targets.iter().map(|(q, _)| q.clone()).collect();
    let Some(sol) = basis
        .iter()
        .find(|v| !v[ncols - 1].is_zero() && !v[ncols - 2].is_zero())
    else {
        return Err(TransformError::NotRemovable(
            "the linear system has only the trivial solution; specifying some parameters may be required".into(),
        ));
    };

    let mut coeffs: Vec<RatPoly> = (0..n)
        .map(|k| RatPoly::new(sol[k * (bound + 1)..(k + 1) * (bound + 1)].to_vec()))
        .collect();
    coeffs.push(pn_shape.scale(&sol[ncols - 2]));
    if coeffs[0].is_zero() {
        return Err(TransformError::NotRemovable("antecedent has a zero leading coefficient".into()));
    }
    let antecedent = make_ode(coeffs)?;

    // The system matches raw coefficients; confirm the canonical round trip too.
    if deform(&antecedent)?.ode != *ode {
        return Err(TransformError::NotRemovable(
            "antecedent does not deform back to the input".into(),
        ));
    }
    Ok(UndeformResult {
        ode: antecedent,
        removed_points: removed,
        free_parameters: basis.len() - 1,
    })
}
