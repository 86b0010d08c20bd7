#![allow(dead_code)]

use sleig::BoundaryConditions;

/// Boundary conditions with a closed-form coefficient row.
pub const NAMED_BCS: [&str; 6] = [
    "dirichlet",
    "neumann",
    "dirichlet-neumann",
    "neumann-dirichlet",
    "robin-neumann",
    "robin",
];

pub fn bc(name: &str) -> BoundaryConditions {
    BoundaryConditions::by_name(name).unwrap()
}

/// Closed-form `(ξ_n, η_n, θ_n)`, scaled to unit max-norm.
pub fn closed_form(name: &str, n: usize) -> [f64; 3] {
    let f = n as f64;
    let v = match name {
        "dirichlet" => [1.0, 0.0, -1.0],
        "neumann" => [1.0, 0.0, -f * (f + 1.0) / ((f + 2.0) * (f + 3.0))],
        "dirichlet-neumann" => {
            let d = (f + 2.0).powi(2);
            [1.0, (2.0 * f + 3.0) / d, -((f + 1.0) / (f + 2.0)).powi(2)]
        }
        "neumann-dirichlet" => {
            let d = (f + 2.0).powi(2);
            [1.0, -(2.0 * f + 3.0) / d, -((f + 1.0) / (f + 2.0)).powi(2)]
        }
        "robin-neumann" => {
            let d = (f + 2.0).powi(2) * (2.0 + (f + 1.0) * (f + 3.0));
            [
                1.0,
                2.0 * (2.0 * f + 3.0) / d,
                -(f + 1.0).powi(2) * (2.0 + f * (f + 2.0)) / d,
            ]
        }
        "robin" if n == 0 => [2.0 / 3.0, 1.0, 1.0 / 3.0],
        "robin" => {
            let d = (f + 1.0) * (f + 2.0).powi(2) * (f + 3.0) - 4.0;
            [1.0, 4.0 * (2.0 * f + 3.0) / d, -(f * (f + 1.0).powi(2) * (f + 2.0) - 4.0) / d]
        }
        _ => panic!("no closed form for {name}"),
    };
    let s = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    v.map(|x| x / s)
}

pub fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}
