use serde::{Deserialize, Serialize};

use super::{order_at, singular_points, LinearOde, OdeError, Point, SingularKind};
use crate::frobenius::IndicialExponents;
use crate::polyrat::rational::serde_rat_vec;
use crate::polyrat::{format_rat, rational_roots, BigRat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiemannColumn {
    pub location: Point,
    pub exponents: IndicialExponents,
    pub apparent: bool,
}

/// Singular points with their exponents, plus the locations of apparent points
/// and the accessory zeros of `P_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiemannSymbol {
    pub order: usize,
    pub columns: Vec<RiemannColumn>,
    /// Locations of apparent singular points.
    #[serde(with = "serde_rat_vec")]
    pub apparent_params: Vec<BigRat>,
    /// Rational zeros of `P_n` that are not zeros of `P_0`.
    #[serde(with = "serde_rat_vec")]
    pub accessory_params: Vec<BigRat>,
}

pub fn riemann_symbol(ode: &LinearOde) -> Result<RiemannSymbol, OdeError> {
    let sp = singular_points(ode);
    if let Some(bad) = sp.points.iter().find(|p| p.kind == SingularKind::IrregularSingular) {
        return Err(OdeError::NotFuchsian(bad.location.clone()));
    }
    let columns = sp
        .points
        .iter()
        .map(|p| RiemannColumn {
            location: p.location.clone(),
            exponents: p.exponents.clone().expect("regular points carry exponents"),
            apparent: p.kind == SingularKind::ApparentSingular,
        })
        .collect::<Vec<_>>();
    let apparent_params = columns
        .iter()
        .filter(|c| c.apparent)
        .filter_map(|c| c.location.finite().cloned())
        .collect();
    let accessory_params = if ode.last().is_zero() {
        Vec::new()
    } else {
        rational_roots(ode.last())?
            .distinct()
            .into_iter()
            .filter(|r| order_at(ode.leading(), r) == Some(0))
            .collect()
    };
    Ok(RiemannSymbol {
        order: ode.order(),
        columns,
        apparent_params,
        accessory_params,
    })
}

impl RiemannSymbol {
    pub fn column(&self, location: &Point) -> Option<&RiemannColumn> {
        self.columns.iter().find(|c| &c.location == location)
    }

    /// Matrix layout: a header of locations, one row per exponent, and a
    /// trailing `q` column for apparent locations and accessory zeros.
    pub fn to_matrix_text(&self) -> String {
        let main: Vec<&RiemannColumn> = self.columns.iter().filter(|c| !c.apparent).collect();
        let mut cells: Vec<Vec<String>> = Vec::new();
        let mut notes = Vec::new();
        for c in &main {
            let mut col = vec![c.location.to_string()];
            col.extend(c.exponents.values.iter().map(format_rat));
            if let Some(f) = &c.exponents.irrational_factor {
                notes.push(format!("* at {}: roots of {}", c.location, f.to_expr_in("r")));
            }
            col.resize(self.order + 1, "*".to_string());
            cells.push(col);
        }
        let mut qcol = vec!["q".to_string()];
        let mut qs: Vec<String> = self.apparent_params.iter().map(format_rat).collect();
        qs.extend(self.accessory_params.iter().map(|a| format!("{} (accessory)", format_rat(a))));
        qcol.push(qs.join(", "));
        qcol.resize(self.order + 1, String::new());

        let widths: Vec<usize> = cells
            .iter()
            .map(|c| c.iter().map(|s| s.chars().count()).max().unwrap_or(1))
            .collect();
        let mut out = String::new();
        for row in 0..=self.order {
            out.push_str(if row == 0 { "P { " } else { "    " });
            for (c, w) in cells.iter().zip(&widths) {
                out.push_str(&format!("{:<w$}  ", c[row], w = *w));
            }
            out.push_str("; ");
            out.push_str(&qcol[row]);
            let line = out.trim_end().to_string();
            out = line;
            if row == self.order {
                out.push_str(" }");
            }
            out.push('\n');
        }
        for n in notes {
            out.push_str(&n);
            out.push('\n');
        }
        for c in self.columns.iter().filter(|c| c.apparent) {
            let ex: Vec<String> = c.exponents.values.iter().map(format_rat).collect();
            out.push_str(&format!("apparent at {}: exponents {}\n", c.location, ex.join(", ")));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::make_ode;
    use crate::polyrat::{int, RatPoly};

    #[test]
    fn euler_symbol() {
        // z^2 w'' - 2w = 0
        let ode = make_ode(vec![RatPoly::from_ints(&[0, 0, 1]), RatPoly::zero(), RatPoly::from_ints(&[-2])]).unwrap();
        let rs = riemann_symbol(&ode).unwrap();
        assert_eq!(rs.columns.len(), 2);
        assert_eq!(rs.column(&Point::Finite(int(0))).unwrap().exponents.values, vec![int(-1), int(2)]);
        assert_eq!(rs.column(&Point::Infinity).unwrap().exponents.values, vec![int(-2), int(1)]);
        assert!(rs.apparent_params.is_empty());
        let text = rs.to_matrix_text();
        assert!(text.starts_with("P { 0   inf  ;"), "{text}");
    }

    #[test]
    fn irregular_rejected() {
        let ode = make_ode(vec![RatPoly::from_ints(&[1]), RatPoly::zero(), RatPoly::from_ints(&[1])]).unwrap();
        assert_eq!(riemann_symbol(&ode), Err(OdeError::NotFuchsian(Point::Infinity)));
    }
}
