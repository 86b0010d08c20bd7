//! Built-in test problems.

use crate::basis::BoundaryConditions;
use crate::potential::Expr;

use super::config::{ProblemSpec, TermSpec};

/// The four boundary conditions the first two potentials are run with.
pub const TABLE_BCS: [&str; 4] = ["neumann-dirichlet", "dirichlet-neumann", "neumann", "robin"];

fn spec(name: &str, bc: BoundaryConditions, even: bool, notes: &str, terms: Vec<TermSpec>) -> ProblemSpec {
    ProblemSpec {
        name: name.to_string(),
        notes: notes.to_string(),
        even,
        bc,
        terms,
    }
}

/// `10 e^{1-x} / ((1-x)^{3/4} (1+x)^{1/4})`
pub fn q1(bc: BoundaryConditions) -> ProblemSpec {
    spec("q1", bc, false, "", vec![TermSpec::builtin("exp_decay", 0.75, 0.25, 0, 0)])
}

/// `10 cos(4(1+x)) / (1+x)^{1/2} + 5 sin(4(1+x)) / ((1-x)^{7/8} (1+x)^{3/4})`
pub fn q2(bc: BoundaryConditions) -> ProblemSpec {
    spec(
        "q2",
        bc,
        false,
        "",
        vec![
            TermSpec::builtin("cos4", 0.0, 0.5, 0, 0),
            TermSpec::builtin("sin4", 0.875, 0.75, 0, 1),
        ],
    )
}

/// `10 / ((2 - x²)(1 - x²)^β)` with Neumann conditions.
pub fn q3(beta: f64) -> ProblemSpec {
    spec(
        &format!("q3-{}", beta_tag(beta)),
        BoundaryConditions::neumann(),
        true,
        "",
        vec![TermSpec::expr(Expr::InvQuadratic { scale: 10.0, a: 2.0 }, beta, beta, 0, 0)],
    )
}

/// `5 [cosh x (1+x)^{1/5} + 2 log(3/2 + x)(1-x)^{1/5} + 4(1-x²)] / (1-x²)^β`
/// with `y(-1) - y'(-1) = y'(1) = 0`, split into three terms.
pub fn q4(beta: f64) -> ProblemSpec {
    spec(
        &format!("q4-{}", beta_tag(beta)),
        BoundaryConditions::robin_neumann(),
        false,
        "terms: 5cosh(x) with (β, β-1/5); 10log(3/2+x) with (β-1/5, β); 20 with (β-1, β-1)",
        vec![
            TermSpec::expr(Expr::Cosh { scale: 5.0, freq: 1.0, phase: 0.0 }, beta, beta - 0.2, 0, 0),
            TermSpec::expr(Expr::Log { scale: 10.0, offset: 1.5 }, beta - 0.2, beta, 0, 0),
            TermSpec::expr(Expr::Const { value: 20.0 }, beta - 1.0, beta - 1.0, 0, 0),
        ],
    )
}

/// `10 / (1 - x²)^{3/4}` with Neumann conditions.
pub fn intro() -> ProblemSpec {
    spec(
        "intro",
        BoundaryConditions::neumann(),
        true,
        "",
        vec![TermSpec::expr(Expr::Const { value: 10.0 }, 0.75, 0.75, 0, 0)],
    )
}

/// `q ≡ 0`
pub fn free(bc: BoundaryConditions) -> ProblemSpec {
    spec("free", bc, true, "", Vec::new())
}

fn beta_tag(beta: f64) -> String {
    for (v, tag) in [(0.5, "1/2"), (0.75, "3/4"), (0.4, "2/5"), (0.8, "4/5")] {
        if (beta - v).abs() < 1e-15 {
            return tag.to_string();
        }
    }
    format!("{beta}")
}

/// Every problem used in the experiments: the first two potentials under
/// the four table boundary conditions, both `q3` and `q4` variants, and the
/// introductory Neumann problem.
pub fn builtin_suite() -> Vec<ProblemSpec> {
    let mut out = Vec::new();
    for bc in TABLE_BCS {
        let b = BoundaryConditions::by_name(bc).expect("table bc names are registered");
        out.push(q1(b).with_bc(b, bc));
    }
    for bc in TABLE_BCS {
        let b = BoundaryConditions::by_name(bc).expect("table bc names are registered");
        out.push(q2(b).with_bc(b, bc));
    }
    out.push(q3(0.5));
    out.push(q3(0.75));
    out.push(q4(0.4));
    out.push(q4(0.8));
    out.push(intro());
    out
}

/// Looks up a potential by name; `bc` overrides its default conditions.
///
/// Names: `free`, `q1`, `q2`, `q3-1/2`, `q3-3/4`, `q4-2/5`, `q4-4/5`, `intro`.
pub fn lookup(name: &str, bc: Option<BoundaryConditions>) -> Option<ProblemSpec> {
    let default_bc = BoundaryConditions::neumann_dirichlet();
    let mut spec = match name {
        "free" => free(bc.unwrap_or(BoundaryConditions::dirichlet())),
        "q1" => q1(bc.unwrap_or(default_bc)),
        "q2" => q2(bc.unwrap_or(default_bc)),
        "q3-1/2" => q3(0.5),
        "q3-3/4" => q3(0.75),
        "q4-2/5" => q4(0.4),
        "q4-4/5" => q4(0.8),
        "intro" => intro(),
        _ => return None,
    };
    if let Some(b) = bc {
        spec.bc = b;
    }
    Some(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_builds() {
        let suite = builtin_suite();
        assert_eq!(suite.len(), 13);
        for s in &suite {
            s.problem().unwrap_or_else(|e| panic!("{}: {e}", s.name));
        }
    }

    #[test]
    fn q2_terms() {
        let p = q2(BoundaryConditions::neumann_dirichlet()).problem().unwrap();
        assert_eq!(p.terms.len(), 2);
        assert_eq!((p.terms[0].exponents.beta, p.terms[0].exponents.gamma), (0.0, 0.5));
        assert_eq!((p.terms[1].exponents.beta, p.terms[1].exponents.gamma), (0.875, 0.75));
        assert_eq!(p.terms[0].l, 0);
        assert_eq!(p.terms[1].l, 1);
    }

    #[test]
    fn q4_matches_closed_form() {
        for beta in [0.4, 0.8] {
            let p = q4(beta).problem().unwrap();
            for x in [-0.9f64, -0.3, 0.0, 0.45, 0.95] {
                let w = 1.0 - x * x;
                let expect = 5.0
                    * (x.cosh() * (1.0 + x).powf(0.2) + 2.0 * (1.5 + x).ln() * (1.0 - x).powf(0.2) + 4.0 * w)
                    / w.powf(beta);
                assert!((p.potential(x) - expect).abs() < 1e-12 * expect.abs());
            }
        }
    }

    #[test]
    fn lookup_names() {
        assert!(lookup("q3-3/4", None).is_some());
        assert!(lookup("nope", None).is_none());
        let s = lookup("q1", Some(BoundaryConditions::robin())).unwrap();
        assert_eq!(s.bc, BoundaryConditions::robin());
    }
}
