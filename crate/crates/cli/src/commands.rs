use bracketforge::jacobi::{extract_pair, jacobi_violations, skew_emergence_test};
use bracketforge::nr::{compatibility_residuals, WEDGE_COEFFICIENT};
use bracketforge::rational::{format_rational, parse_rational};
use bracketforge::weyl::{
    commutator_leibniz_residuals, prop1_residual, representation_algebra, truncated_leibniz_probe,
};
use bracketforge::{
    sample, solve_leibniz_space, AlgebraSpec, BilinearOp, Element, GridViolation, JacobiError, LeibnizRule, Order,
    PolyAlgebra, Polynomial, Rational, WeylElement,
};
use clap::ValueEnum;
use serde_json::{json, Map, Value};

use crate::input::{self, CliError, JacobiInput, Operator};
use crate::report::{Check, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyCheck {
    Leibniz,
    Jacobi,
    JacobiRight,
    Skew,
    Prop1,
}

impl VerifyCheck {
    pub const ALL: [VerifyCheck; 5] =
        [VerifyCheck::Leibniz, VerifyCheck::Jacobi, VerifyCheck::JacobiRight, VerifyCheck::Skew, VerifyCheck::Prop1];

    fn name(self) -> &'static str {
        match self {
            VerifyCheck::Leibniz => "leibniz",
            VerifyCheck::Jacobi => "jacobi",
            VerifyCheck::JacobiRight => "jacobi-right",
            VerifyCheck::Skew => "skew",
            VerifyCheck::Prop1 => "prop1",
        }
    }
}

/// Global knobs shared by every subcommand.
#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub seed: u64,
    pub grid_degree: u32,
    pub cap: u32,
}

fn element_json(alg: &AlgebraSpec, e: &Element) -> Value {
    let m: Map<String, Value> =
        e.support().map(|(i, c)| (alg.labels()[i].clone(), Value::String(format_rational(c)))).collect();
    Value::Object(m)
}

fn index_witness(alg: &AlgebraSpec, indices: &[usize], residual: &Element) -> Value {
    let labels: Vec<&str> = indices.iter().map(|&i| alg.labels()[i].as_str()).collect();
    json!({ "indices": indices, "labels": labels, "residual": element_json(alg, residual) })
}

pub fn verify(report: &mut Report, spec: &str, bracket: &str, checks: &[VerifyCheck]) -> Result<(), CliError> {
    let (alg, digest) = input::algebra_spec(spec)?;
    report.input(digest);
    let (op, digest) = input::bracket(bracket, &alg)?;
    report.input(digest);

    report.set("algebra", alg.name());
    report.set("dim", alg.dim());
    report.set("tensor_entries", op.tensor_entries().len());
    report.set("commutator_multiple", op.commutator_multiple().map(|c| format_rational(&c)));

    let mut seen = Vec::new();
    for &c in checks {
        if seen.contains(&c) {
            continue;
        }
        seen.push(c);
        report.check(run_verify_check(&alg, &op, c));
    }
    Ok(())
}

fn run_verify_check(alg: &AlgebraSpec, op: &BilinearOp<'_>, check: VerifyCheck) -> Check {
    let name = check.name();
    match check {
        VerifyCheck::Leibniz => {
            let v = op.leibniz_residuals();
            let witness = v.first().map(|w| {
                let (i, j, k) = w.indices;
                let mut value = index_witness(alg, &[i, j, k], &w.residual);
                let rule = match w.rule {
                    LeibnizRule::SecondArgument => "second-argument",
                    LeibnizRule::FirstArgument => "first-argument",
                };
                value["rule"] = rule.into();
                value
            });
            Check::counted(name, v.len(), witness)
        }
        VerifyCheck::Jacobi | VerifyCheck::JacobiRight => {
            let v = op.jacobi_violations(check == VerifyCheck::JacobiRight);
            let witness = v.first().map(|((i, j, k), r)| index_witness(alg, &[*i, *j, *k], r));
            Check::counted(name, v.len(), witness)
        }
        VerifyCheck::Skew => {
            let v = op.skew_residual();
            let witness = v.first().map(|(i, j, r)| index_witness(alg, &[*i, *j], r));
            Check::counted(name, v.len(), witness)
        }
        VerifyCheck::Prop1 => match op.first_prop1_violation() {
            None => Check::pass(name),
            Some(((a, b, c, d), r)) => Check::fail(name, Some(index_witness(alg, &[a, b, c, d], &r)))
                .with_note("scan stops at the first failing basis quadruple"),
        },
    }
}

pub fn solve_leibniz(report: &mut Report, spec: &str) -> Result<(), CliError> {
    let (alg, digest) = input::algebra_spec(spec)?;
    report.input(digest);
    let space = solve_leibniz_space(&alg);

    let mut basis = Vec::new();
    let mut all_leibniz = true;
    let mut all_commutator = true;
    for op in &space {
        all_leibniz &= op.satisfies_leibniz();
        let multiple = op.commutator_multiple();
        all_commutator &= multiple.is_some();
        let tensor: Vec<Value> =
            op.tensor_entries().iter().map(|(i, j, k, c)| json!([i, j, k, format_rational(c)])).collect();
        let central = op.compute_c().ok().map(|c| element_json(&alg, &c));
        basis.push(json!({
            "tensor": tensor,
            "commutator_multiple": multiple.map(|m| format_rational(&m)),
            "central_element": central,
        }));
    }
    let verdict = if space.is_empty() {
        "only the zero bracket satisfies the Leibniz rule"
    } else if all_commutator {
        "every Leibniz bracket is a multiple of the commutator"
    } else {
        "Leibniz brackets exist that are not multiples of the commutator"
    };

    report.set("algebra", alg.name());
    report.set("unknowns", alg.dim().pow(3));
    report.set("dimension", space.len());
    report.set("basis", basis);
    report.set("verdict", verdict);
    report.check(if all_leibniz {
        Check::pass("basis-satisfies-leibniz")
    } else {
        Check::fail("basis-satisfies-leibniz", None)
    });
    let span = if all_commutator { Check::pass("commutator-span") } else { Check::fail("commutator-span", None) };
    report.check(span.with_note(verdict));
    Ok(())
}

fn grid_witness(alg: &PolyAlgebra, grid: &[Polynomial], v: &GridViolation) -> Value {
    let points: Vec<String> = v.indices.iter().map(|&i| alg.format(&grid[i])).collect();
    json!({
        "check": v.check,
        "indices": v.indices,
        "points": points,
        "residual": alg.format(&v.residual),
    })
}

pub fn jacobi(report: &mut Report, path: &str, perturbations: usize, params: Params) -> Result<(), CliError> {
    let (alg, input, digest) = input::jacobi_input(path)?;
    report.input(digest);
    let degree = params.grid_degree;
    let grid = alg.grid(degree);
    report.set("algebra", alg.to_string());
    report.set("grid_degree", degree);
    report.set("grid_points", grid.len());

    let pair = match input {
        JacobiInput::Pair(p) => p.reduced(&alg),
        JacobiInput::Bracket(b) => match extract_pair(&alg, &b, degree) {
            Ok(p) => {
                report.check(Check::pass("extraction"));
                p
            }
            Err(JacobiError::NotSkew { i, j, residual }) => {
                let witness = json!({
                    "indices": [i, j],
                    "points": [alg.format(&grid[i]), alg.format(&grid[j])],
                    "residual": alg.format(&residual),
                });
                report.check(Check::fail("extraction", Some(witness)).with_note("bracket is not skew-symmetric"));
                return Ok(());
            }
            Err(e) => {
                report.check(Check::fail("extraction", None).with_note(e.to_string()));
                return Ok(());
            }
        },
    };
    let bracket = pair.reconstruct();
    report.set("pair", pair.to_json_value(&alg));
    report.set("bracket", bracket.to_json_value(&alg));
    report.set("wedge_coefficient", WEDGE_COEFFICIENT);

    let round_trip = extract_pair(&alg, &bracket, degree).map(|back| back == pair);
    report.check(match round_trip {
        Ok(true) => Check::pass("round-trip"),
        Ok(false) => Check::fail("round-trip", None).with_note("extracted pair differs"),
        Err(e) => Check::fail("round-trip", None).with_note(e.to_string()),
    });

    let violations = jacobi_violations(&alg, &bracket, degree);
    let is_jacobi = violations.is_empty();
    report.check(Check::counted("jacobi", violations.len(), violations.first().map(|v| grid_witness(&alg, &grid, v))));

    let c = compatibility_residuals(&alg, &pair, degree);
    report.check(Check::counted("nr-gamma-lambda", c.r1.len(), c.r1.first().map(|v| grid_witness(&alg, &grid, v))));
    report.check(Check::counted("nr-lambda-lambda", c.r2.len(), c.r2.first().map(|v| grid_witness(&alg, &grid, v))));
    let compatible = c.is_zero();
    report.set("jacobi_holds", is_jacobi);
    report.set("nr_compatible", compatible);
    let agree = Check::pass("jacobi-iff-nr");
    report.check(if is_jacobi == compatible {
        agree
    } else {
        Check::fail("jacobi-iff-nr", Some(json!({ "jacobi": is_jacobi, "nr_compatible": compatible })))
    });

    if perturbations > 0 {
        report.check(skew_emergence(&alg, &pair, perturbations, is_jacobi, params)?);
    }
    Ok(())
}

fn skew_emergence(
    alg: &PolyAlgebra,
    pair: &bracketforge::JacobiPair,
    count: usize,
    base_is_jacobi: bool,
    params: Params,
) -> Result<Check, CliError> {
    if !base_is_jacobi {
        return Ok(Check::pass("skew-emergence").with_note("skipped: base pair does not satisfy Jacobi"));
    }
    let mut rng = sample::rng(params.seed);
    let mut survivors = Vec::new();
    for k in 0..count {
        let s = sample::symmetric_perturbation(&mut rng, alg, 1);
        let broke =
            skew_emergence_test(alg, pair, &s, params.grid_degree).map_err(|e| CliError::Invariant(e.to_string()))?;
        if !broke {
            survivors.push(json!({ "perturbation": k, "terms": s.to_json_value(alg) }));
        }
    }
    let n = survivors.len();
    Ok(Check::counted("skew-emergence", n, survivors.into_iter().next())
        .with_note(format!("{count} symmetric perturbations of bi-order at most (1,1)")))
}

fn order_check(name: &str, orders: &[Order]) -> Check {
    match orders.iter().find(|o| o.finite().is_none()) {
        None => Check::pass(name),
        Some(o) => Check::fail(name, None).with_note(o.to_string()),
    }
}

pub fn order(report: &mut Report, algebra: &str, operator: &str, params: Params) -> Result<(), CliError> {
    let (alg, digest) = input::poly_algebra(algebra)?;
    report.input(digest);
    let (op, digest) = input::operator(operator, &alg)?;
    report.input(digest);
    report.set("algebra", alg.to_string());
    report.set("cap", params.cap);

    match op {
        Operator::Linear(op) => {
            let o = op.operator_order(&alg, params.cap);
            report.set("kind", "linear");
            report.set("order", o.to_string());
            report.set("normal_form_degree", op.structural_order(&alg));
            report.check(order_check("bounded-order", &[o]));
        }
        Operator::Bilinear(op) => {
            let o = op.bi_order(&alg, params.cap);
            report.set("kind", "bilinear");
            report.set("bi_order", json!([o.first.to_string(), o.second.to_string()]));
            let symbols = op.bi_symbols(&alg).map(|(a, b)| json!([[a.0, a.1], [b.0, b.1]]));
            report.set("bi_symbols", symbols);
            report.set("skew", op.is_skew(&alg));
            report.check(order_check("bounded-order", &[o.first, o.second]));

            let loday = jacobi_violations(&alg, &op, params.grid_degree).is_empty();
            report.set("loday_on_grid", loday);
            let first_order = matches!((o.first, o.second), (Order::Finite(a), Order::Finite(b)) if a <= 1 && b <= 1);
            let check = if alg.has_nilpotents() {
                Check::pass("loday-first-order")
                    .with_note("nilpotent algebra: the order at most (1,1) bound for Loday brackets does not apply")
            } else if !loday {
                Check::pass("loday-first-order").with_note("not Loday on the grid; no bound expected")
            } else if first_order {
                Check::pass("loday-first-order")
            } else {
                Check::fail("loday-first-order", None).with_note("Loday bracket of bi-order above (1,1)")
            };
            report.check(check);
        }
    }
    Ok(())
}

pub struct WeylOptions {
    pub exprs: Vec<String>,
    pub count: usize,
    pub lambdas: Vec<String>,
    pub probe: Option<u32>,
}

fn tuples<const N: usize>(items: &[WeylElement]) -> Vec<[WeylElement; N]> {
    let n = items.len();
    (0..n.pow(N as u32))
        .map(|mut code| {
            std::array::from_fn(|_| {
                let e = items[code % n].clone();
                code /= n;
                e
            })
        })
        .collect()
}

fn strs<const N: usize>(t: &[WeylElement; N]) -> Vec<String> {
    t.iter().map(ToString::to_string).collect()
}

pub fn weyl_check(report: &mut Report, opts: &WeylOptions, params: Params) -> Result<(), CliError> {
    let given = opts
        .exprs
        .iter()
        .map(|e| WeylElement::parse(e).map_err(|err| CliError::Parse(format!("{e:?}: {err}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let lambdas = opts
        .lambdas
        .iter()
        .map(|l| parse_rational(l).map_err(|e| CliError::Parse(e.to_string())))
        .collect::<Result<Vec<Rational>, _>>()?;

    let mut rng = sample::rng(params.seed);
    let (triples, quads): (Vec<[WeylElement; 3]>, Vec<[WeylElement; 4]>) = if given.is_empty() {
        let t = (0..opts.count).map(|_| std::array::from_fn(|_| sample::weyl(&mut rng, 3, 4))).collect();
        let q = (0..opts.count).map(|_| std::array::from_fn(|_| sample::weyl(&mut rng, 3, 4))).collect();
        (t, q)
    } else {
        (tuples(&given), tuples(&given))
    };
    report.set("source", if given.is_empty() { "seeded samples" } else { "given elements" });
    report.set("triples", triples.len());
    report.set("quadruples", quads.len());

    let ccr = WeylElement::p().commutator(&WeylElement::q());
    report.check(if ccr == WeylElement::one() {
        Check::pass("canonical-commutation")
    } else {
        Check::fail("canonical-commutation", Some(json!({ "[P,Q]": ccr.to_string() })))
    });

    let assoc: Vec<_> = triples
        .iter()
        .filter_map(|t| {
            let r = t[0].mul(&t[1]).mul(&t[2]).sub(&t[0].mul(&t[1].mul(&t[2])));
            (!r.is_zero()).then(|| json!({ "elements": strs(t), "residual": r.to_string() }))
        })
        .collect();
    report.check(Check::counted("associativity", assoc.len(), assoc.first().cloned()));

    let leibniz: Vec<_> = triples
        .iter()
        .filter_map(|t| {
            let (second, first) = commutator_leibniz_residuals(&t[0], &t[1], &t[2]);
            (!second.is_zero() || !first.is_zero())
                .then(|| json!({ "elements": strs(t), "second": second.to_string(), "first": first.to_string() }))
        })
        .collect();
    report.check(Check::counted("leibniz", leibniz.len(), leibniz.first().cloned()));

    let mut prop1 = Vec::new();
    for l in &lambdas {
        for q in &quads {
            let r = prop1_residual(l, &q[0], &q[1], &q[2], &q[3]);
            if !r.is_zero() {
                prop1.push(json!({ "lambda": format_rational(l), "elements": strs(q), "residual": r.to_string() }));
            }
        }
    }
    report.set("lambdas", lambdas.iter().map(format_rational).collect::<Vec<_>>());
    report.check(Check::counted("prop1", prop1.len(), prop1.first().cloned()));

    let alg = representation_algebra();
    let grid = alg.grid(8);
    let mut rep = Vec::new();
    for t in &triples {
        let (ab, da, db) = (t[0].mul(&t[1]).to_diffop(), t[0].to_diffop(), t[1].to_diffop());
        if let Some(f) = grid.iter().find(|f| ab.apply(&alg, f) != da.apply(&alg, &db.apply(&alg, f))) {
            rep.push(json!({ "elements": [t[0].to_string(), t[1].to_string()], "input": alg.format(f) }));
        }
    }
    report.check(
        Check::counted("representation", rep.len(), rep.first().cloned()).with_note("P = d/dt, Q = t, on t^0..t^8"),
    );

    if !given.is_empty() {
        let mut table = Vec::new();
        for a in &given {
            for b in &given {
                table.push(json!({
                    "a": a.to_string(),
                    "b": b.to_string(),
                    "product": a.mul(b).to_string(),
                    "commutator": a.commutator(b).to_string(),
                }));
            }
        }
        report.set("table", table);
    }

    if let Some(d) = opts.probe {
        let out = d.max(2 * d.saturating_sub(1));
        let probe = truncated_leibniz_probe(d, out);
        report.set("probe", serde_json::to_value(probe).expect("serializable"));
    }
    Ok(())
}
