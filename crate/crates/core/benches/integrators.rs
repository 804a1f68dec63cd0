use criterion::{criterion_group, criterion_main, Criterion};
use diratom::dynamics::{
    eigh, evolve, step_exp_midpoint, step_magnus2, step_rk4, EvolutionProblem, InitialState,
    IntegratorKind,
};
use diratom::model::{
    hamiltonian_transformed, CouplingKind, FieldModel, ModelKind, PhysicalParams,
};
use diratom::{Spinor4, C64};
use nalgebra::{DMatrix, DVector};
use std::hint::black_box;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn drive_problem(integrator: IntegratorKind) -> EvolutionProblem {
    EvolutionProblem {
        model: ModelKind::TransformedLiteral,
        coupling: CouplingKind::AlphaE,
        params: PhysicalParams {
            mass: 1.0,
            omega: 0.5,
            mu: 1.0,
            ..Default::default()
        },
        field: FieldModel::Cosine {
            amplitude: [0.0, 0.0, 0.1],
            nu: 1.0,
            phase: 0.0,
        },
        initial_state: InitialState::Four(Spinor4::new(c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.))),
        t0: 0.0,
        t1: 10.0,
        dt: 0.01,
        integrator,
        sample_stride: 100,
    }
}

fn bench_single_steps(criterion: &mut Criterion) {
    let problem = drive_problem(IntegratorKind::ExpMidpoint);
    let hamiltonian_at = problem.hamiltonian_fn().unwrap();
    let state = DVector::from_vec(vec![c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.)]);
    let mut group = criterion.benchmark_group("step");
    group.bench_function("exp_midpoint", |b| {
        b.iter(|| step_exp_midpoint(&hamiltonian_at, black_box(&state), 0.3, 0.01, 1.0).unwrap())
    });
    group.bench_function("magnus2", |b| {
        b.iter(|| step_magnus2(&hamiltonian_at, black_box(&state), 0.3, 0.01, 1.0).unwrap())
    });
    group.bench_function("rk4", |b| {
        b.iter(|| step_rk4(&hamiltonian_at, black_box(&state), 0.3, 0.01, 1.0).unwrap())
    });
    group.finish();
}

fn bench_evolve(criterion: &mut Criterion) {
    let mut group = criterion.benchmark_group("evolve_1000_steps");
    for integrator in [
        IntegratorKind::ExpMidpoint,
        IntegratorKind::Magnus2,
        IntegratorKind::Rk4,
    ] {
        let problem = drive_problem(integrator);
        group.bench_function(format!("{integrator:?}"), |b| {
            b.iter(|| evolve(black_box(&problem)).unwrap())
        });
    }
    group.finish();
}

fn bench_eigh(criterion: &mut Criterion) {
    let params = PhysicalParams {
        mass: 1.0,
        omega: 0.5,
        mu: 1.0,
        ..Default::default()
    };
    let field = FieldModel::Static {
        amplitude: [0.2, 0.1, 0.4],
    };
    let h4 = hamiltonian_transformed(&params, CouplingKind::AlphaE, &field, 0.0).unwrap();
    let hd = DMatrix::from_fn(4, 4, |i, j| h4[(i, j)]);
    criterion.bench_function("eigh_4x4", |b| b.iter(|| eigh(black_box(&hd)).unwrap()));
}

criterion_group!(benches, bench_single_steps, bench_evolve, bench_eigh);
criterion_main!(benches);
