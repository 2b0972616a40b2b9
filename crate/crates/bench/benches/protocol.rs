use std::collections::BTreeMap;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use bomproof_bench::BenchUniverse;
use bomproof_core::hashing::{hash, Digest, DomainTag};
use bomproof_core::smt::{setup, verify_commit, SparseTree};
use bomproof_core::{prove, verify_proof, BackendRegistry, ProveRequest, TranscriptBackend};

fn bench_commit(c: &mut Criterion) {
    let mut group = c.benchmark_group("commit");
    for log2 in [8u32, 10, 12] {
        let depth = log2 + 2;
        let params = setup(128, depth).unwrap();
        let leaves: BTreeMap<u64, Digest> = (0..(1u64 << log2))
            .map(|i| (i * 3, hash(DomainTag::LeafPt, &i.to_be_bytes())))
            .collect();
        group.throughput(Throughput::Elements(1 << log2));
        group.bench_with_input(
            BenchmarkId::from_parameter(1u64 << log2),
            &leaves,
            |b, l| {
                b.iter(|| SparseTree::commit(&params, l).unwrap().root());
            },
        );
    }
    group.finish();
}

fn bench_open_verify(c: &mut Criterion) {
    let universe = BenchUniverse::build(10, 7);
    let indices: Vec<u64> = universe.index_map.values().copied().collect();
    c.bench_function("open/depth12", |b| {
        let mut i = 0usize;
        b.iter(|| {
            i = (i + 1) % indices.len();
            universe.pt.open(indices[i]).unwrap()
        });
    });
    let opening = universe.pt.open(indices[0]).unwrap();
    c.bench_function("verify_commit/depth12", |b| {
        b.iter(|| verify_commit(&universe.g_pt, &opening.leaf, indices[0], &opening));
    });
}

fn bench_prove_verify(c: &mut Criterion) {
    let universe = BenchUniverse::build(10, 7);
    let registry = BackendRegistry::with_default();
    let mut group = c.benchmark_group("transcript");
    for deps in [10usize, 50, 100] {
        let sbom = universe.sbom(deps, deps as u64);
        let request = ProveRequest {
            sbom: &sbom,
            pt: &universe.pt,
            st: &universe.st,
            index_map: &universe.index_map,
            policy_set_id: String::new(),
            artifact_digest: universe.artifact,
            require_hiding: false,
        };
        group.throughput(Throughput::Elements(deps as u64));
        group.bench_with_input(BenchmarkId::new("prove", deps), &request, |b, req| {
            b.iter(|| {
                let mut rng = ChaCha20Rng::seed_from_u64(1);
                prove(&TranscriptBackend, req, &mut rng).unwrap()
            });
        });
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let proof = prove(&TranscriptBackend, &request, &mut rng).unwrap();
        group.bench_with_input(BenchmarkId::new("verify", deps), &proof, |b, p| {
            b.iter(|| {
                verify_proof(
                    &registry,
                    p,
                    &universe.g_pt,
                    &universe.g_st,
                    "",
                    &universe.artifact,
                )
            });
        });
    }
    group.finish();
}

criterion_group!(benches, bench_commit, bench_open_verify, bench_prove_verify);
criterion_main!(benches);
