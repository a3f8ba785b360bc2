//! Acceptance suite: one PASS/FAIL line per criterion, each at its stated
//! tolerance and time budget. Exits non-zero if any criterion fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

mod common;

use common::{clues_of, random_valid_assignment};
use partiti_core::format::{parse_puzzle, serialize_puzzle, PuzzleDocument};
use partiti_core::generator::{generate_puzzle, rate_difficulty, Difficulty, GeneratorConfig, Puzzle};
use partiti_core::grid::{max_clue_bound, max_feasible_clue, validate_assignment};
use partiti_core::partition::{
    count_distinct_partitions, count_odd_partitions, enumerate_bounded_distinct_partitions, p_asymptotic, q_asymptotic,
};
use partiti_core::series::{distinct_parts_product, odd_parts_product};
use partiti_core::service::{PuzzleQuery, Service};
use partiti_core::solver::{brute_force_solve, count_solutions, initial_candidates, propagate, solve, SolverConfig};
use partiti_core::{ClueGrid, DigitSet, GridDims};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name))
        .unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

/// Counts of partitions of 0..=n with parts from `parts`, each usable at
/// most once if `distinct`. Independent of the library's tables.
fn oracle_counts(n: usize, parts: impl Iterator<Item = usize>, distinct: bool) -> Vec<u128> {
    let mut ways = vec![0u128; n + 1];
    ways[0] = 1;
    for k in parts {
        if distinct {
            for s in (k..=n).rev() {
                ways[s] += ways[s - k];
            }
        } else {
            for s in k..=n {
                ways[s] += ways[s - k];
            }
        }
    }
    ways
}

fn euler_identity() -> Check {
    for n in 0..=200 {
        let q = count_distinct_partitions(n).map_err(|e| e.to_string())?.get();
        let odd = count_odd_partitions(n).map_err(|e| e.to_string())?.get();
        ensure(q == odd, || format!("n={n}: distinct {q} != odd {odd}"))?;
    }
    Ok(())
}

fn generating_functions() -> Check {
    let distinct = distinct_parts_product(100).map_err(|e| e.to_string())?;
    let odd = odd_parts_product(100).map_err(|e| e.to_string())?;
    ensure(distinct == odd, || "products differ".into())?;
    for n in 0..=100u32 {
        let q = count_distinct_partitions(n).map_err(|e| e.to_string())?.get() as i64;
        let c = distinct.coeff(n as usize).unwrap();
        ensure(c == q, || format!("coefficient {n}: {c} != q({n}) = {q}"))?;
    }
    Ok(())
}

fn point_values() -> Check {
    let q = |n| count_distinct_partitions(n).unwrap().get();
    ensure(q(5) == 3, || format!("q(5) = {}", q(5)))?;
    ensure(q(0) == 1, || format!("q(0) = {}", q(0)))?;
    let odd5 = count_odd_partitions(5).unwrap().get();
    ensure(odd5 == 3, || format!("odd(5) = {odd5}"))?;
    let e: Vec<Vec<u32>> = enumerate_bounded_distinct_partitions(2, 9)
        .into_iter()
        .map(|p| p.into_parts())
        .collect();
    ensure(e == vec![vec![2]], || format!("enumerate(2, 9) = {e:?}"))
}

fn asymptotics() -> Check {
    let p100 = oracle_counts(100, 1..=100, false)[100] as f64;
    let q100 = oracle_counts(100, 1..=100, true)[100] as f64;
    ensure(p100 == 190_569_292.0 && q100 == 444_793.0, || {
        "in-suite oracle disagrees with known values".into()
    })?;
    let rp = p_asymptotic(100).unwrap().value / p100 - 1.0;
    let rq = q_asymptotic(100).unwrap().value / q100 - 1.0;
    ensure(rp.abs() <= 0.05, || format!("p relative error {rp:.4}"))?;
    ensure(rq.abs() <= 0.05, || format!("q relative error {rq:.4}"))
}

fn clue_bound() -> Check {
    let d66 = GridDims::new(6, 6).unwrap();
    ensure(max_clue_bound(d66) == 39, || {
        format!("max_clue_bound(6x6) = {}", max_clue_bound(d66))
    })?;
    for cell in d66.cells() {
        let m = max_feasible_clue(d66, cell).map_err(|e| e.to_string())?;
        ensure(m == 39, || format!("max_feasible_clue at {cell} = {m}"))?;
    }
    let d22 = GridDims::new(2, 2).unwrap();
    let others = [1u8, 2, 5, 9, 17, 23, 40, 45];
    for pos in 0..4 {
        for big in 40..=45u8 {
            for a in others {
                for b in others {
                    for c in others {
                        let mut rest = [a, b, c].into_iter();
                        let clues: Vec<u8> = (0..4)
                            .map(|i| if i == pos { big } else { rest.next().unwrap() })
                            .collect();
                        let grid = ClueGrid::new(d22, clues.clone()).unwrap();
                        let n = brute_force_solve(&grid).map_err(|e| e.to_string())?.len();
                        ensure(n == 0, || format!("{clues:?}: {n} solutions"))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn corner_fixture() -> Check {
    let clues = ClueGrid::from_rows(&[vec![2, 3], vec![22, 18]]).unwrap();
    let table = propagate(&initial_candidates(&clues), true);
    let d = clues.dims();
    let two = DigitSet::single(2);
    let three = DigitSet::single(3);
    ensure(table.candidates(d.cell(0)) == [two], || {
        format!("(0,0): {:?}", table.candidates(d.cell(0)))
    })?;
    ensure(table.candidates(d.cell(1)) == [three], || {
        format!("(0,1): {:?}", table.candidates(d.cell(1)))
    })?;
    let mut solved = solve(&clues, &SolverConfig::uncapped())
        .map_err(|e| e.to_string())?
        .solutions;
    let mut brute = brute_force_solve(&clues).map_err(|e| e.to_string())?;
    solved.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
    brute.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
    ensure(solved.len() == 6, || format!("{} solutions", solved.len()))?;
    ensure(solved == brute, || "solver and brute force disagree".into())
}

fn solver_oracle_equivalence() -> Check {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(0x5EED);
    for i in 0..200 {
        let dims = if i % 2 == 0 {
            GridDims::new(2, 2)
        } else {
            GridDims::new(2, 3)
        }
        .unwrap();
        let assignment = random_valid_assignment(dims, &mut rng);
        let clues = clues_of(&assignment);
        let mut solved = solve(&clues, &SolverConfig::uncapped())
            .map_err(|e| e.to_string())?
            .solutions;
        let mut brute = brute_force_solve(&clues).map_err(|e| e.to_string())?;
        solved.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
        brute.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
        ensure(solved == brute, || {
            format!(
                "grid {i} {:?}: solver {} vs brute {}",
                clues.as_slice(),
                solved.len(),
                brute.len()
            )
        })?;
        ensure(brute.contains(&assignment), || {
            format!("grid {i}: source assignment missing")
        })?;
    }
    Ok(())
}

fn generator_soundness(puzzles: &mut Vec<(u64, Puzzle)>) -> Check {
    let dims = GridDims::new(6, 6).unwrap();
    for seed in 0..100 {
        let p = generate_puzzle(&GeneratorConfig::new(dims, seed)).map_err(|e| format!("seed {seed}: {e}"))?;
        puzzles.push((seed, p));
    }
    for (seed, p) in puzzles.iter() {
        let n = count_solutions(&p.clues, 2).map_err(|e| e.to_string())?;
        ensure(n == 1, || format!("seed {seed}: {n} solutions"))?;
        let v = validate_assignment(&p.clues, &p.solution, true).map_err(|e| e.to_string())?;
        ensure(v.is_empty(), || format!("seed {seed}: {} violations", v.len()))?;
        let again = generate_puzzle(&GeneratorConfig::new(dims, *seed)).map_err(|e| e.to_string())?;
        let (a, b) = (
            serialize_puzzle(&PuzzleDocument::from_puzzle(p)),
            serialize_puzzle(&PuzzleDocument::from_puzzle(&again)),
        );
        ensure(a == b, || format!("seed {seed}: regeneration differs"))?;
    }
    Ok(())
}

fn format_round_trip(puzzles: &[(u64, Puzzle)]) -> Check {
    for (seed, p) in puzzles {
        let doc = PuzzleDocument::from_puzzle(p);
        let text = serialize_puzzle(&doc);
        let back = parse_puzzle(&text).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(back == doc, || format!("seed {seed}: parse(serialize) differs"))?;
        ensure(serialize_puzzle(&back) == text, || {
            format!("seed {seed}: serialize not stable")
        })?;
    }
    let golden = fixture("golden-6x6-seed42.json");
    let p42 = &puzzles.iter().find(|(s, _)| *s == 42).expect("seed 42 generated").1;
    ensure(serialize_puzzle(&PuzzleDocument::from_puzzle(p42)) == golden, || {
        "golden 6x6 bytes changed".into()
    })?;
    let doc = parse_puzzle(&golden).map_err(|e| e.to_string())?;
    ensure(serialize_puzzle(&doc) == golden, || {
        "golden fixture does not round-trip".into()
    })
}

fn hard_golden_seed() -> Check {
    let golden = parse_puzzle(&fixture("golden-6x6-seed42-hard.json")).map_err(|e| e.to_string())?;
    let served = Service::new()
        .get_puzzle(&PuzzleQuery {
            difficulty: Some("hard".into()),
            seed: Some(42),
            rows: Some(6),
            cols: Some(6),
        })
        .map_err(|e| e.message)?;
    ensure(served == golden.without_solution(), || {
        "served puzzle differs from golden".into()
    })?;
    let rating = rate_difficulty(&served.clues, partiti_core::generator::DEFAULT_MEDIUM_BRANCH_LIMIT)
        .map_err(|e| e.to_string())?;
    ensure(rating == Difficulty::Hard, || format!("rated {rating}"))?;
    Ok(())
}

struct Suite {
    failures: usize,
}

impl Suite {
    fn run(&mut self, name: &str, budget: Option<Duration>, f: impl FnOnce() -> Check) {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let result = result.and_then(|()| match budget {
            Some(b) if took > b => Err(format!("took {took:.2?}, budget {b:.0?}")),
            _ => Ok(()),
        });
        match result {
            Ok(()) => println!("PASS  {name}  ({took:.2?})"),
            Err(msg) => {
                self.failures += 1;
                println!("FAIL  {name}  ({took:.2?}): {msg}");
            }
        }
    }
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut suite = Suite { failures: 0 };
    println!("acceptance suite");
    suite.run("euler identity, n <= 200, exact, < 1 s", Some(secs(1)), euler_identity);
    suite.run(
        "generating functions agree to degree 100, exact, < 1 s",
        Some(secs(1)),
        generating_functions,
    );
    suite.run(
        "point values q(5)=3, q(0)=1, odd(5)=3, enumerate(2,9)=[[2]]",
        None,
        point_values,
    );
    suite.run("asymptotics within 5% at n = 100, < 1 s", Some(secs(1)), asymptotics);
    suite.run(
        "39 bound and 2x2 clues >= 40 unsolvable, < 1 s",
        Some(secs(1)),
        clue_bound,
    );
    suite.run(
        "2x2 corner fixture: propagation fixes {2} and {3}, 6 solutions equal brute force, < 1 s",
        Some(secs(1)),
        corner_fixture,
    );
    suite.run(
        "solver equals brute force on 200 random grids, < 30 s",
        Some(secs(30)),
        solver_oracle_equivalence,
    );

    let mut puzzles = Vec::new();
    suite.run(
        "generator soundness, 100 seeds at 6x6, < 5 min",
        Some(secs(300)),
        || generator_soundness(&mut puzzles),
    );
    suite.run("format round trip and golden bytes", None, || {
        ensure(puzzles.len() == 100, || {
            format!("only {} puzzles generated", puzzles.len())
        })?;
        format_round_trip(&puzzles)
    });
    suite.run(
        "hard golden seed rates Hard through the service",
        None,
        hard_golden_seed,
    );

    if suite.failures == 0 {
        println!("all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", suite.failures);
        ExitCode::FAILURE
    }
}
