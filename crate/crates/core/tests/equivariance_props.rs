mod common;

use common::*;
use rand::Rng;
use structenc::equivariance::*;
use structenc::linalg::{pauli_x, pauli_y, pauli_z, ComplexMatrix, RealMatrix, UnitaryMatrix};

#[test]
fn classifier_is_klein_invariant() {
    let (a, _) = klein_four_symmetry();
    let model = GqmlModel::new(0.99).unwrap();
    let mut r = rng(17);
    for _ in 0..500 {
        let x = [r.random_range(-4.0..4.0), r.random_range(-4.0..4.0)];
        let y = model.y(x[0], x[1]).unwrap();
        assert!((y - gqml_closed_form(x[0], x[1], 0.99)).abs() <= 1e-12);
        for g in 0..4 {
            let gx = a.apply(g, &x);
            assert!((model.y(gx[0], gx[1]).unwrap() - y).abs() <= 1e-12);
        }
    }
}

#[test]
fn reflection_span_matches_brute_force() {
    // X P X = −P selects exactly the Paulis anticommuting with X.
    let x = pauli_x();
    let paulis = [("X", pauli_x()), ("Y", pauli_y()), ("Z", pauli_z())];
    let flipped: Vec<&str> = paulis
        .iter()
        .filter(|(_, p)| {
            let conj: ComplexMatrix = &x * p * &x;
            (conj + p).iter().all(|z| z.norm() < 1e-15)
        })
        .map(|(n, _)| *n)
        .collect();
    assert_eq!(flipped, vec!["Y", "Z"]);

    let (act, rep) = SymmetryFixture::z2_reflection().parts().unwrap();
    let basis = solve_default(&act, &rep).unwrap();
    assert_eq!(basis.dim, flipped.len());
    for (_, p) in paulis.iter().filter(|(n, _)| flipped.contains(n)) {
        let t = [structenc::linalg::HermitianMatrix::new(p.clone()).unwrap()];
        assert!(basis.projection_residual(&t).unwrap() < 1e-12);
    }
}

#[test]
fn more_constraints_never_grow_the_space() {
    // ℤ₂ × ℤ₂ on two qubits by X⊗I and I⊗X, acting on ℝ by sign flips.
    use structenc::linalg::{identity, kron};
    let group = FiniteGroup::klein_four();
    let sign = |s: f64| RealMatrix::from_element(1, 1, s);
    let xi = kron(&pauli_x(), &identity(2));
    let ix = kron(&identity(2), &pauli_x());
    let maps = [identity(4), xi.clone(), ix, kron(&pauli_x(), &pauli_x())]
        .into_iter()
        .map(|m| UnitaryMatrix::new(m).unwrap())
        .collect();
    let rep = Representation::new(group.clone(), maps).unwrap();
    let act = Action::new(group, vec![sign(1.0), sign(-1.0), sign(-1.0), sign(1.0)]).unwrap();
    let full = solve_default(&act, &rep).unwrap();

    let z2 = FiniteGroup::cyclic(2).unwrap();
    let sub_act = Action::new(z2.clone(), vec![sign(1.0), sign(-1.0)]).unwrap();
    let sub_rep = Representation::new(z2, vec![UnitaryMatrix::identity(4), UnitaryMatrix::new(xi).unwrap()]).unwrap();
    let partial = solve_default(&sub_act, &sub_rep).unwrap();
    assert!(full.dim <= partial.dim);
    // Pauli strings P⊗Q anticommuting with X⊗I, and additionally with I⊗X.
    assert_eq!(partial.dim, 8);
    assert_eq!(full.dim, 4);
    let _ = pauli_z();
}

#[test]
fn every_basis_tuple_satisfies_all_elements() {
    let (a, r) = klein_four_symmetry();
    let basis = solve_default(&a, &r).unwrap();
    for t in &basis.basis {
        assert!(constraint_residual(&a, &r, t) <= 1e-8);
    }
}

#[test]
fn grid_csv_is_row_major() {
    let rows = decision_grid(-1.0, 1.0, 3, 0.5).unwrap();
    let csv = grid_to_csv(&rows);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x1,x2,y,class");
    assert!(lines[1].starts_with("-1,-1,"));
    assert!(lines[2].starts_with("-1,0,"));
    assert_eq!(lines.len(), 10);
}
