//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rbloch_core::abelian::{smith_normal_form, FPGroup, IntMatrix, Structure};
use rbloch_core::bloch::{
    lambda_map, pre_bloch, refined_bloch, refined_pre_bloch, special_element, sym_square_and_k2,
    BlochPresentation, PreBloch, RefinedPreBloch, Special,
};
use rbloch_core::fields::FiniteField;
use rbloch_core::gw::{gw_consistency, gw_ring, GroupRing};
use rbloch_core::specialize::{
    chebotarev_search, cor_val_witness, mchi_action, odd_part, predicted_kernel, wd_suite,
    ChiModule, Phi, SpecializeError, Specializer,
};
use rbloch_core::Exec;

const Q_SET: [u64; 7] = [5, 7, 9, 11, 13, 25, 27];

struct Fields {
    pb: Vec<(u64, PreBloch)>,
    rp: Vec<(u64, RefinedPreBloch)>,
}

impl Fields {
    fn build() -> Self {
        let fields: Vec<Arc<FiniteField>> = Q_SET
            .iter()
            .map(|&q| Arc::new(FiniteField::of_order(q).unwrap()))
            .collect();
        let pb = fields
            .iter()
            .map(|k| (k.order(), pre_bloch(k.clone())))
            .collect();
        let rp = fields
            .iter()
            .map(|k| (k.order(), refined_pre_bloch(k.clone()).unwrap()))
            .collect();
        Fields { pb, rp }
    }
}

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn scaled(v: &[BigInt], n: i64) -> Vec<BigInt> {
    v.iter().map(|c| c * n).collect()
}

fn c1_orders(f: &Fields) -> Outcome {
    for (q, p) in &f.pb {
        let order = p.group().order();
        check(
            order == Some(BigInt::from(q + 1)),
            format!("|P(F_{q})| = {order:?}"),
        )?;
    }
    Ok(format!("|P(F_q)| = q+1 for q in {Q_SET:?}"))
}

fn c2_odd(f: &Fields) -> Outcome {
    for (q, p) in &f.pb {
        let local = p.group().localize_away_2().structure();
        let predicted = predicted_kernel(*q).map_err(|e| e.to_string())?;
        let expected = predicted.group().structure();
        check(
            local.is_cyclic() && local.order() == Some(BigInt::from(odd_part(q + 1))),
            format!("F_{q}: {local}"),
        )?;
        check(
            local == expected,
            format!("F_{q}: prediction {expected} vs {local}"),
        )?;
    }
    Ok("P(F_q)[1/2] cyclic of order (q+1)' and matches the prediction".into())
}

fn c3_constant(f: &Fields) -> Outcome {
    for (q, p) in &f.pb {
        let k = p.field();
        let g = p.group();
        let c = special_element(p, Special::C).unwrap();
        check(
            g.is_zero(&scaled(&c, 6)).unwrap(),
            format!("6C != 0 in P(F_{q})"),
        )?;
        for x in k.units().filter(|&x| x != k.one()) {
            let mut v = p.symbol(0, x);
            v[p.generator(0, k.sub(k.one(), x))] += 1;
            check(
                g.equal(&v, &c).unwrap(),
                format!("F_{q}: [x]+[1-x] differs from C at x = {}", k.format(x)),
            )?;
        }
    }
    Ok("6C = 0 and [x]+[1-x] = C for every x".into())
}

fn c4_psi(f: &Fields) -> Outcome {
    for (q, p) in &f.pb {
        let k = p.field();
        let g = p.group();
        let psi: Vec<Vec<BigInt>> = k
            .units()
            .map(|x| special_element(p, Special::Psi(x)).unwrap())
            .collect();
        for x in k.units() {
            let px = &psi[x.index() as usize - 1];
            check(
                g.is_zero(&scaled(px, 2)).unwrap(),
                format!("F_{q}: 2ψ({}) != 0", k.format(x)),
            )?;
            for y in k.units() {
                let py = &psi[y.index() as usize - 1];
                let pxy = &psi[k.mul(x, y).index() as usize - 1];
                let sum: Vec<BigInt> = px.iter().zip(py).map(|(a, b)| a + b).collect();
                check(
                    g.equal(pxy, &sum).unwrap(),
                    format!("F_{q}: ψ(xy) != ψ(x)+ψ(y)"),
                )?;
            }
        }
    }
    Ok("2ψ(x) = 0 and ψ(xy) = ψ(x)+ψ(y), exhaustive".into())
}

fn c5_gw() -> Outcome {
    for q in [5u64, 7, 9, 13] {
        let gw = gw_ring(Arc::new(FiniteField::of_order(q).unwrap())).map_err(|e| e.to_string())?;
        let s = gw.structure();
        check(
            s == Structure {
                free_rank: 1,
                torsion: vec![BigInt::from(2)],
            },
            format!("GW(F_{q}) = {s}"),
        )?;
        let report = gw_consistency(&gw).map_err(|e| e.to_string())?;
        check(report.checks.len() == 4, "expected four identity families")?;
        for c in &report.checks {
            check(
                c.passed,
                format!("F_{q}: {} failed: {:?}", c.name, c.witness),
            )?;
        }
    }
    Ok("Z[V]/J_k = Z + Z/2, all identity families pass".into())
}

fn c6_lambda(f: &Fields) -> Outcome {
    for (q, rp) in &f.rp {
        let l = lambda_map(rp).map_err(|e| e.to_string())?;
        let rel = rp.group().relations();
        for i in 0..rel.rows() {
            let img = l.hom.apply(&rel.row(i)).unwrap();
            check(
                l.hom.target().is_zero(&img).unwrap(),
                format!("F_{q}: {} maps to {img:?}", rp.relation_labels()[i]),
            )?;
        }
        check(l.is_equivariant(rp), format!("F_{q}: Λ not equivariant"))?;
    }
    Ok("every refined five-term relation maps to 0 under Λ".into())
}

fn c7_refined(f: &Fields) -> Outcome {
    let mut summary = Vec::new();
    for (q, rp) in &f.rp {
        let rb = refined_bloch(rp).map_err(|e| e.to_string())?;
        check(rb.bloch.order().is_some(), format!("B(F_{q}) infinite"))?;
        check(
            rb.kernel_killed_by_4,
            format!("F_{q}: kernel not killed by 4"),
        )?;
        check(
            rb.odd_isomorphic,
            format!("F_{q}: odd localizations differ"),
        )?;
        summary.push(format!("B(F_{q}) = {}", rb.bloch.structure()));
    }
    Ok(format!(
        "4·ker(B -> R̃B) = 0, odd parts agree; {}",
        summary.join(", ")
    ))
}

fn c8_k2(f: &Fields) -> Outcome {
    for (q, p) in f.pb.iter().filter(|(q, _)| [5, 9, 13].contains(q)) {
        let s = sym_square_and_k2(p).map_err(|e| e.to_string())?;
        check(
            s.sym.group.invariant_factors() == vec![BigInt::from(2)],
            format!("S₂(F_{q}) != Z/2"),
        )?;
        check(
            s.cokernel.is_trivial(),
            format!("coker(P(F_{q}) -> S₂) = {}", s.cokernel.structure()),
        )?;
    }
    Ok("coker(P(F_q) -> S₂(F_q)) = 0 for q in {5, 9, 13}".into())
}

fn c9_specialization() -> Outcome {
    let mut total = 0;
    for q in [5u64, 7] {
        let sp = Specializer::new();
        for phi in Phi::ALL {
            let r = wd_suite(&sp, q, phi, 200, 50, 2, 0x5eed, Exec::default())
                .map_err(|e| e.to_string())?;
            check(
                r.passed(),
                format!("F_{q}(t), φ = {phi:?}: {:?}", r.violations.first()),
            )?;
            total += r.relations_checked + r.psi1_checked + r.equivariance_checked;
        }
    }
    Ok(format!(
        "{total} checks over F_5(t), F_7(t), both φ, 0 violations"
    ))
}

fn c10_witness() -> Outcome {
    let sp = Specializer::new();
    for q in [5u64, 9] {
        let w = cor_val_witness(&sp, q).map_err(|e| e.to_string())?;
        check(
            w.equals_four_y && w.nonzero && w.sixteen_y_nonzero,
            format!("q = {q}: {w:?}"),
        )?;
        check(
            w.valuation_pi_inv % 2 != 0 && w.valuation_one_minus_pi_inv % 2 != 0,
            "valuations not odd",
        )?;
    }
    check(
        matches!(
            cor_val_witness(&sp, 7),
            Err(SpecializeError::NoOddWitness(7))
        ),
        "q = 7 produced a witness",
    )?;
    Ok("Steinberg image is 4y != 0 for q = 5, 9; no odd witness for q = 7".into())
}

/// Odd divisibility chains `d₁ | d₂ | …` of the given length, entries in `3..=max`.
fn odd_chains(len: usize, max: u64) -> Vec<Vec<u64>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for chain in odd_chains(len - 1, max) {
        let step = chain.last().copied().unwrap_or(1);
        let first = if chain.is_empty() { 3 } else { step };
        out.extend(
            (first..=max)
                .step_by(2 * step as usize)
                .map(|d| [chain.clone(), vec![d]].concat()),
        );
    }
    out
}

fn c11_mchi() -> Outcome {
    let chains: Vec<Vec<u64>> = (1..=3).flat_map(|l| odd_chains(l, 99)).collect();
    let mut checked = 0u64;
    for rank in 1..=3usize {
        for character in 1..(1usize << rank) {
            for chain in &chains {
                let m = ChiModule::new(rank, character, chain).map_err(|e| e.to_string())?;
                let ring = GroupRing::new(m.classes().clone());
                let neg = m.negative_classes();
                for &u in &neg {
                    for &w in &neg {
                        let st = ring.mul(&ring.pfister(u), &ring.pfister(w));
                        let a = mchi_action(&m, &st).map_err(|e| e.to_string())?;
                        check(
                            a.scalar == BigInt::from(4) && a.bijective,
                            format!("rank {rank}, χ {character}, {chain:?}"),
                        )?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{checked} Steinberg actions equal 4 and are bijective ({} modules)",
        chains.len()
    ))
}

fn c12_chebotarev() -> Outcome {
    let small = chebotarev_search(3, 30).map_err(|e| e.to_string())?;
    check(
        small.primes == vec![2, 5, 11, 17, 23, 29],
        format!("ℓ = 3, bound 30: {:?}", small.primes),
    )?;
    let mut densities = Vec::new();
    for l in [3u64, 5, 7] {
        let r = chebotarev_search(l, 100_000).map_err(|e| e.to_string())?;
        check(
            r.relative_error <= 0.30,
            format!("ℓ = {l}: density {} vs {}", r.density, r.expected),
        )?;
        densities.push(format!("ℓ={l}: {:.4}/{:.4}", r.density, r.expected));
    }
    Ok(densities.join(", "))
}

/// Row echelon form over i64 by repeated least-pivot reduction, used only
/// as a membership oracle.
fn hnf_i64(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut rest = rows.to_vec();
    let mut basis = Vec::new();
    for col in 0..n {
        loop {
            let Some(p) = (0..rest.len())
                .filter(|&i| rest[i][col] != 0)
                .min_by_key(|&i| rest[i][col].abs())
            else {
                break;
            };
            let pivot = rest[p].clone();
            let mut done = true;
            for (i, r) in rest.iter_mut().enumerate() {
                if i != p && r[col] != 0 {
                    let t = r[col].div_euclid(pivot[col]);
                    r.iter_mut().zip(&pivot).for_each(|(x, y)| *x -= t * y);
                    done &= r[col] == 0;
                }
            }
            if done {
                let mut b = rest.swap_remove(p);
                if b[col] < 0 {
                    b.iter_mut().for_each(|x| *x = -*x);
                }
                basis.push(b);
                break;
            }
        }
    }
    basis
}

fn reduce_i64(basis: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    let mut v = v.to_vec();
    for b in basis {
        let p = b.iter().position(|&x| x != 0).unwrap();
        let t = v[p].div_euclid(b[p]);
        v.iter_mut().zip(b).for_each(|(x, y)| *x -= t * y);
    }
    v
}

/// Breadth-first count of `Z^n / rows`, capped.
fn brute_force_order(rows: &[Vec<i64>], n: usize, cap: usize) -> Option<usize> {
    let basis = hnf_i64(rows, n);
    let zero = vec![0i64; n];
    let mut seen: HashSet<Vec<i64>> = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for i in 0..n {
            let mut y = x.clone();
            y[i] += 1;
            let y = reduce_i64(&basis, &y);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    Some(seen.len())
}

fn c13_core() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for trial in 0..500 {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..c).map(|_| rng.gen_range(-20..=20)).collect())
            .collect();
        let m = IntMatrix::from_i64_rows(c, &rows);
        let (d, u, v) = smith_normal_form(&m);
        check(u.mul(&m).mul(&v) == d, format!("trial {trial}: U·M·V != D"))?;
        check(
            u.determinant().magnitude().is_one() && v.determinant().magnitude().is_one(),
            format!("trial {trial}: not unimodular"),
        )?;
        for i in 0..r {
            for j in 0..c {
                check(
                    i == j || d.get(i, j).is_zero(),
                    format!("trial {trial}: D not diagonal"),
                )?;
            }
        }
        let diag: Vec<BigInt> = (0..r.min(c)).map(|i| d.get(i, i)).collect();
        check(
            rbloch_core::abelian::is_divisibility_chain(&diag),
            format!("trial {trial}: {diag:?} not a chain"),
        )?;
    }
    let mut compared = 0;
    while compared < 200 {
        let n = rng.gen_range(1..=3);
        let r = rng.gen_range(n..=n + 2);
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..n).map(|_| rng.gen_range(-12..=12)).collect())
            .collect();
        let g = FPGroup::new(
            (0..n).map(|i| format!("g{i}")).collect(),
            IntMatrix::from_i64_rows(n, &rows),
        )
        .unwrap();
        let brute = brute_force_order(&rows, n, 200);
        match g.order() {
            Some(o) if o <= BigInt::from(200) => {
                check(
                    brute == Some(usize::try_from(&o).unwrap()),
                    format!("{rows:?}: order {o} vs {brute:?}"),
                )?;
                compared += 1;
            }
            _ => check(
                brute.is_none(),
                format!("{rows:?}: order {:?} vs brute {brute:?}", g.order()),
            )?,
        }
    }
    Ok("500 SNF identities; 200 orders <= 200 match brute-force counts".into())
}

fn main() {
    let start = Instant::now();
    let fields = Fields::build();
    println!(
        "built P and RP for q in {Q_SET:?} in {:.2?}",
        start.elapsed()
    );
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("pre-Bloch orders", Box::new(|| c1_orders(&fields))),
        ("odd localization", Box::new(|| c2_odd(&fields))),
        ("constant element", Box::new(|| c3_constant(&fields))),
        ("psi laws", Box::new(|| c4_psi(&fields))),
        ("GW structure", Box::new(c5_gw)),
        ("Lambda well-defined", Box::new(|| c6_lambda(&fields))),
        ("refined Bloch", Box::new(|| c7_refined(&fields))),
        ("K2 sequence", Box::new(|| c8_k2(&fields))),
        ("specialization suite", Box::new(c9_specialization)),
        ("valuation witness", Box::new(c10_witness)),
        ("M_chi model", Box::new(c11_mchi)),
        ("Chebotarev", Box::new(c12_chebotarev)),
        ("core algebra", Box::new(c13_core)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match run() {
            Ok(detail) => println!("PASS {:>2} {name} [{:.2?}]: {detail}", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{:.2?}]: {why}", i + 1, t.elapsed());
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.2?}",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
