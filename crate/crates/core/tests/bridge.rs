use std::path::Path;
use std::time::{Duration, Instant};

use ftl_core::bridge::tptp::Role;
use ftl_core::bridge::{
    find_executable, read_problem, run_external, write_problem, ExternalProverSpec, ExternalVerdict,
};
use ftl_core::syntax::parse_text;
use ftl_core::verifier::{build_tasks, process_task, ProofTask, VerifyConfig};

fn fixture_tasks(name: &str) -> Vec<ProofTask> {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let (doc, vocab) = parse_text(&std::fs::read_to_string(path).unwrap()).unwrap();
    build_tasks(&doc, &vocab).unwrap()
}

fn alive(pid: i32) -> bool {
    // SAFETY: signal 0 only checks for existence
    unsafe { libc::kill(pid, 0) == 0 }
}

fn read_pids(path: &Path) -> Vec<i32> {
    std::fs::read_to_string(path)
        .unwrap_or_default()
        .split_whitespace()
        .map(|p| p.parse().unwrap())
        .collect()
}

#[test]
fn timed_out_process_tree_is_killed() {
    let dir = tempfile::tempdir().unwrap();
    let pids = dir.path().join("pids");
    let spec = ExternalProverSpec {
        id: "sleeper".into(),
        command: format!(
            "sleep 60 & echo $! >> {p}; echo $$ >> {p}; cat {{file}} > /dev/null; sleep 60",
            p = pids.display()
        ),
        timeout: Duration::from_millis(500),
    };
    let start = Instant::now();
    let verdict = run_external(&spec, "fof(goal, conjecture, $true).").unwrap();
    assert_eq!(verdict, ExternalVerdict::TimedOut);
    assert!(start.elapsed() < Duration::from_secs(10));
    let pids = read_pids(&pids);
    assert_eq!(pids.len(), 2);
    // the killed processes may take a moment to be reaped by init
    let deadline = Instant::now() + Duration::from_secs(5);
    while pids.iter().any(|&p| alive(p)) && Instant::now() < deadline {
        std::thread::sleep(Duration::from_millis(20));
    }
    for p in pids {
        assert!(!alive(p), "process {p} survived");
    }
}

#[test]
fn szs_lines_are_mapped() {
    let spec = |out: &str| ExternalProverSpec {
        id: "echo".into(),
        command: format!("cat {{file}} > /dev/null; echo '{out}'"),
        timeout: Duration::from_secs(5),
    };
    let run = |out: &str| run_external(&spec(out), "").unwrap();
    assert_eq!(
        run("% SZS status Theorem for goal"),
        ExternalVerdict::Proved
    );
    assert_eq!(
        run("% SZS status CounterSatisfiable for goal"),
        ExternalVerdict::Saturated
    );
    assert!(
        matches!(run("no status here"), ExternalVerdict::Failed(out) if out.contains("no status here"))
    );
}

#[test]
fn problem_file_reaches_the_prover() {
    let spec = ExternalProverSpec {
        id: "grep".into(),
        command: "grep -q 'fof(goal, conjecture' {file} && echo 'SZS status Theorem'".into(),
        timeout: Duration::from_secs(5),
    };
    let problem = write_problem(&[], &ftl_core::fol::Formula::True).unwrap();
    assert_eq!(
        run_external(&spec, &problem.text).unwrap(),
        ExternalVerdict::Proved
    );
}

#[test]
fn fixture_tasks_round_trip_through_tptp() {
    let mut tasks = fixture_tasks("divisibility.ftl");
    tasks.extend(fixture_tasks("corpus.ftl"));
    for t in tasks {
        let problem = write_problem(&t.labeled_premises(), &t.goal).unwrap();
        assert!(problem.mangling.is_injective());
        let back = read_problem(&problem.text, &problem.mangling)
            .unwrap_or_else(|e| panic!("{e}\n{}", problem.text));
        assert_eq!(back.len(), t.premises.len() + 1);
        for (a, p) in back.iter().zip(&t.premises) {
            assert_eq!(a.role, Role::Axiom);
            assert!(
                a.formula.alpha_eq(&p.formula),
                "{} vs {}",
                a.formula,
                p.formula
            );
        }
        let goal = back.last().unwrap();
        assert_eq!(goal.role, Role::Conjecture);
        assert!(
            goal.formula.alpha_eq(&t.goal),
            "{} vs {}",
            goal.formula,
            t.goal
        );
    }
}

/// Known TPTP provers and how to call them.
fn installed_provers() -> Vec<ExternalProverSpec> {
    [
        (
            "eprover",
            "eprover --auto --silent --soft-cpu-limit={timeout} {file}",
        ),
        ("vampire", "vampire --mode casc -t {timeout} {file}"),
    ]
    .into_iter()
    .filter(|(exe, _)| find_executable(exe))
    .map(|(id, command)| ExternalProverSpec {
        id: id.into(),
        command: command.into(),
        timeout: Duration::from_secs(10),
    })
    .collect()
}

#[test]
fn external_provers_agree_with_native() {
    let provers = installed_provers();
    if provers.is_empty() {
        eprintln!("skipped: no external prover installed");
        return;
    }
    let cfg = VerifyConfig::default();
    for t in fixture_tasks("divisibility.ftl") {
        let entry = process_task(&t, &cfg);
        if entry.refutation.is_none() {
            continue;
        }
        let problem = write_problem(&entry.task.labeled_premises(), &entry.task.goal).unwrap();
        for spec in &provers {
            assert_eq!(
                run_external(spec, &problem.text).unwrap(),
                ExternalVerdict::Proved,
                "{} at {}",
                spec.id,
                t.origin
            );
        }
    }
}
