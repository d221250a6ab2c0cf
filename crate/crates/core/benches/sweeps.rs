//! Sequential and parallel runs of the exhaustive sweeps.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use iel_core::corpus::corpus;
use iel_core::coversys::{classify_cover_system, modal_extensions, strict_systems_exhaustive};
use iel_core::formula::iel_minus_axioms;
use iel_core::kripke::{countermodel, enumerate_frames, valid_on_frame, Logic, DEFAULT_GUARD};
use iel_core::par::{self, Strategy};
use iel_core::parser::parse_formula;
use iel_core::reduce::{joinable, reducts};

const STRATEGIES: [Strategy; 2] = [Strategy::Sequential, Strategy::Parallel];

fn kripke_axioms(c: &mut Criterion) {
    let frames = enumerate_frames(4, Logic::IelMinus);
    let axioms = iel_minus_axioms();
    let mut g = c.benchmark_group("kripke axioms on 4 worlds");
    g.sample_size(10);
    for s in STRATEGIES {
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("{s:?}")),
            &s,
            |b, &s| {
                b.iter(|| {
                    par::sum(s, &frames, |f| {
                        axioms
                            .iter()
                            .filter(|ax| {
                                valid_on_frame(f, &ax.formula, DEFAULT_GUARD)
                                    .unwrap()
                                    .is_none()
                            })
                            .count() as u64
                    })
                })
            },
        );
    }
    g.finish();
}

fn kripke_countermodel(c: &mut Criterion) {
    // valid, so the search visits every frame
    let phi = parse_formula("O (p -> q) -> O p -> O q").unwrap();
    let mut g = c.benchmark_group("countermodel search, 4 worlds");
    g.sample_size(10);
    for s in STRATEGIES {
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("{s:?}")),
            &s,
            |b, &s| {
                b.iter(|| {
                    countermodel(black_box(&phi), Logic::IelMinus, 4, DEFAULT_GUARD, s).unwrap()
                })
            },
        );
    }
    g.finish();
}

fn local_confluence(c: &mut Criterion) {
    let items = corpus(1, 300);
    let mut g = c.benchmark_group("local confluence, 300 terms");
    g.sample_size(10);
    for s in STRATEGIES {
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("{s:?}")),
            &s,
            |b, &s| {
                b.iter(|| {
                    par::sum(s, &items, |item| {
                        let rs = reducts(&item.term);
                        let mut joined = 0;
                        for i in 0..rs.len() {
                            for k in i + 1..rs.len() {
                                joined += joinable(&rs[i].1, &rs[k].1, 10_000).is_ok() as u64;
                            }
                        }
                        joined
                    })
                })
            },
        );
    }
    g.finish();
}

fn cover_classification(c: &mut Criterion) {
    let systems: Vec<_> = strict_systems_exhaustive(3)
        .iter()
        .flat_map(modal_extensions)
        .collect();
    let mut g = c.benchmark_group("classify modal systems on 3 points");
    g.sample_size(10);
    for s in STRATEGIES {
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("{s:?}")),
            &s,
            |b, &s| {
                b.iter(|| par::sum(s, &systems, |t| classify_cover_system(t).prenuclear as u64))
            },
        );
    }
    g.finish();
}

criterion_group!(
    benches,
    kripke_axioms,
    kripke_countermodel,
    local_confluence,
    cover_classification
);
criterion_main!(benches);
