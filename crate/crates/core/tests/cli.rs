use std::process::Command;
use treegraft::{MeteredBitSource, RandomSource, Sampler, UnaryWeight, WeightedSampler};

const BIN: &str = env!("CARGO_BIN_EXE_treegraft");

/// Counts bits on its own instead of trusting the inner counter.
struct Counting<R> {
    inner: R,
    seen: u64,
}

impl<R: RandomSource> RandomSource for Counting<R> {
    fn next_bit(&mut self) -> bool {
        self.seen += 1;
        self.inner.next_bit()
    }
    fn bits_consumed(&self) -> u64 {
        self.seen
    }
}

fn stats(args: &[&str]) -> Vec<Vec<u64>> {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stats.csv");
    let out = Command::new(BIN)
        .args(args)
        .arg("--stats")
        .arg(&path)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,size,bits,restarts,time_ns"));
    lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn stats_bits_match_an_independent_counter() {
    let cases: [(&[&str], Sampler, usize); 3] = [
        (
            &[
                "sample",
                "--family",
                "binary",
                "--size",
                "40",
                "--count",
                "30",
                "--seed",
                "3",
                "--algorithm",
                "rejection",
            ],
            Sampler::BinaryRejection,
            40,
        ),
        (
            &[
                "sample", "--family", "motzkin", "--size", "25", "--count", "30", "--seed", "3",
            ],
            Sampler::Motzkin,
            25,
        ),
        (
            &[
                "sample", "--family", "weighted", "--size", "9", "--count", "30", "--seed", "3",
                "--weight", "5/2^2",
            ],
            Sampler::Weighted(WeightedSampler::new(UnaryWeight::new(5, 2).unwrap()).unwrap()),
            9,
        ),
    ];
    for (args, sampler, size) in cases {
        let rows = stats(args);
        assert_eq!(rows.len(), 30);
        for (i, row) in rows.iter().enumerate() {
            let mut src = Counting {
                inner: MeteredBitSource::for_sample(3, i as u64),
                seen: 0,
            };
            let (_, r) = sampler.sample(size, &mut src).unwrap();
            assert_eq!(row[0], i as u64);
            assert_eq!(row[2], src.seen, "{args:?} row {i}");
            assert_eq!(row[2], r.bits_consumed);
            assert_eq!(row[3], r.restarts);
        }
    }
}

#[test]
fn motzkin_stats_smoke() {
    let rows = stats(&[
        "sample", "--family", "motzkin", "--size", "5", "--count", "100000",
    ]);
    assert_eq!(rows.len(), 100_000);
    assert!(rows.iter().all(|r| r[1] == 5));
}

#[test]
fn output_is_independent_of_thread_count() {
    let run = |threads: &str| {
        Command::new(BIN)
            .args([
                "sample",
                "--family",
                "binary",
                "--size",
                "30",
                "--count",
                "64",
                "--format",
                "json",
                "--threads",
                threads,
            ])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| Command::new(BIN).args(args).output().unwrap().status.code();
    assert_eq!(
        code(&["sample", "--family", "binary", "--size", "3"]),
        Some(0)
    );
    assert_eq!(code(&["sample", "--family", "binary"]), Some(2));
    assert_eq!(
        code(&["sample", "--family", "trees", "--size", "3"]),
        Some(2)
    );
    assert_eq!(
        code(&["sample", "--family", "weighted", "--size", "3", "--weight", "-1"]),
        Some(2)
    );
    assert_eq!(code(&["selftest", "quick"]), Some(0));
}

#[test]
fn selftest_reports_each_check() {
    let out = Command::new(BIN).args(["selftest"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("PASS ")).count() >= 20);
    assert!(!text.contains("FAIL"));
    assert!(text.trim_end().ends_with("0 failed"));
}
