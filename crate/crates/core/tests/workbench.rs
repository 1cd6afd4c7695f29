use perlab::workbench::{emit_report, parse_workbench, run_checks, Format, RunOptions, Status};
use perlab::{same_relation, Per};

fn run(text: &str) -> perlab::workbench::Report {
    let doc = parse_workbench(text).unwrap_or_else(|e| panic!("{e}"));
    run_checks(&doc, &RunOptions::default()).unwrap()
}

fn statuses(text: &str) -> Vec<Status> {
    run(text).checks.into_iter().map(|c| c.status).collect()
}

#[test]
fn single_class_per() {
    let doc = parse_workbench("(per R (carrier 0) (classes (0)))").unwrap();
    assert!(same_relation(doc.per("R").unwrap(), &Per::of(&[&[0]]).unwrap()).holds());
}

#[test]
fn errors_point_at_the_offending_form() {
    let e = parse_workbench("(per R (carrier 0) (classes (0)))\n  (per R (carrier 1) (classes (1)))").unwrap_err();
    assert_eq!((e.pos.line, e.pos.col), (2, 8));
    assert!(e.msg.contains("already declared at 1:6"), "{e}");

    let e = parse_workbench("(per R (carrier 0 1) (classes (0)))").unwrap_err();
    assert!(e.msg.contains("partition"), "{e}");

    let e = parse_workbench("(assert (subper R empty))").unwrap_err();
    assert!(e.to_string().starts_with("1:17:"), "{e}");
}

#[test]
fn empty_document() {
    let r = run("");
    assert!(r.checks.is_empty());
    assert_eq!(r.exit_code(), 0);
    let json = String::from_utf8(emit_report(&r, Format::Json)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["checks"], serde_json::json!([]));
    assert_eq!(v["budget"]["universe"], "terms:4");
    assert_eq!(v["budget"]["fuel"], 10_000);
}

#[test]
fn empty_per_is_below_everything() {
    let r = run("(universe (terms 1)) (per R (carrier 0 1) (classes (0) (1))) (assert (subper empty R))");
    assert_eq!(r.checks.len(), 1);
    assert_eq!(r.checks[0].status, Status::Pass);
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn failures_and_undecided_verdicts_set_the_exit_code() {
    let text = "(universe (terms 1)) (fuel 50)
        (per R (carrier 0 1) (classes (0) (1)))
        (per L (carrier 0 1) (classes (0 1)))
        (assert (subper L R))
        (assert (reduces (S I I (S I I)) 0))";
    let r = run(text);
    assert_eq!(r.checks.iter().map(|c| c.status).collect::<Vec<_>>(), [Status::Fail, Status::Undecided]);
    assert!(r.checks.iter().all(|c| c.witness.is_some()));
    assert_eq!(r.exit_code(), 1);
}

#[test]
fn forms_run_in_order_under_the_current_budget() {
    let text = "(universe (terms 1)) (assert (size (exp empty empty) 12))
        (universe (terms 0)) (assert (size (exp empty empty) 3))";
    let r = run(text);
    assert_eq!(r.checks.iter().map(|c| c.status).collect::<Vec<_>>(), [Status::Pass, Status::Pass]);
    assert_eq!(r.budget.universe, "terms:1");
    assert!(r.checks[1].name.ends_with("[terms:0 fuel 10000]"), "{}", r.checks[1].name);
}

#[test]
fn command_line_budget_pins_the_universe() {
    let doc = parse_workbench("(universe (terms 1)) (assert (size (exp empty empty) 3))").unwrap();
    let opts = RunOptions {
        universe: Some("terms:0".parse().unwrap()),
        ..RunOptions::default()
    };
    let r = run_checks(&doc, &opts).unwrap();
    assert_eq!(r.checks[0].status, Status::Pass);
    assert_eq!(r.budget.universe, "terms:0");
}

#[test]
fn negation_flips_decided_verdicts_only() {
    let s = statuses(
        "(universe (terms 1)) (fuel 50)
         (per R (carrier 0 1) (classes (0) (1)))
         (assert (not (subper R empty)))
         (assert (not (subper empty R)))
         (assert (not (reduces (S I I (S I I)) 0)))",
    );
    assert_eq!(s, [Status::Pass, Status::Fail, Status::Undecided]);
}

#[test]
fn runs_are_deterministic() {
    let text = "(universe (terms 2))
        (per Z (carrier 0) (classes (0)))
        (per Bit (carrier 0 1) (classes (0) (1)))
        (functor F (exp Z id))
        (family Fam Z Bit)
        (run check-all)";
    let a = emit_report(&run(text), Format::Json);
    let b = emit_report(&run(text), Format::Json);
    assert_eq!(a, b);
    assert_eq!(run(text).exit_code(), 0);
}

#[test]
fn run_commands_report_fixpoints_and_algebras() {
    let r = run("(universe (terms 3))
        (per Bit (carrier 0 1) (classes (0) (1)))
        (functor C (const Bit))
        (algebra A (functor C) (carrier Bit) (structure I))
        (family Fam A)
        (run fixpoint C)
        (run initial-algebra C Fam)");
    assert!(r.checks.iter().all(|c| c.status == Status::Pass), "{r:#?}");
    assert!(r.checks[0].name.starts_with("fixpoint C: 2 iterations"), "{}", r.checks[0].name);
    assert!(r.checks.iter().any(|c| c.name.contains("initiality")));
}
