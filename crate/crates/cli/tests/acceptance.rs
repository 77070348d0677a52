//! Acceptance criteria, one PASS or FAIL line each. Exits non-zero if any
//! criterion fails.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::Arc;
use std::time::{Duration, Instant};

use hott_core::check::normalize_const;
use hott_core::env::Entry;
use hott_core::eval::Eval;
use hott_core::frontend::elab::elab_expr;
use hott_core::frontend::parser::parse_expr;
use hott_core::manifest::Manifest;
use hott_core::syntax::structural_eq;
use hott_core::{Checked, Checker, Ctx, ErrorClass, Session, Term};

type Outcome = Result<String, String>;

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn manifest() -> Manifest {
    let text = std::fs::read_to_string(corpus().join("corpus.manifest")).expect("manifest");
    Manifest::parse(&text).expect("manifest parses")
}

fn hott(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hott"))
        .args(args)
        .current_dir(corpus())
        .env_remove("HOTT_PATH")
        .output()
        .expect("the hott binary runs")
}

fn session() -> Session {
    Session::new(vec![corpus().join("stdlib")])
}

fn load(s: &mut Session, file: &str) -> Result<Arc<Checked>, String> {
    s.check_file(&corpus().join("stdlib").join(file))
        .map_err(|e| format!("{file} does not check: {e:?}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The declaration is a definition, not a postulate, and its type is
/// convertible with `ty`.
fn proved_at(c: &Checked, name: &str, ty: &str) -> Result<(), String> {
    let entry = c.globals.lookup(name).ok_or_else(|| format!("`{name}` is missing"))?;
    let Entry::Def { ty_val, .. } = &**entry else {
        return Err(format!("`{name}` is postulated"));
    };
    let parsed = parse_expr(ty).map_err(|e| format!("{ty}: {e}"))?;
    let t = elab_expr(&c.globals, &parsed).map_err(|e| format!("{ty}: {e}"))?;
    let mut ck = Checker::new(&c.globals);
    let ctx = Ctx::new();
    let (t, _) = ck.check_type(&ctx, &t).map_err(|e| format!("{ty}: {e}"))?;
    let want = ck.eval(&ctx, &t);
    ensure(Eval::new(&c.globals).convertible(0, &want, ty_val), || {
        format!("`{name}` does not have type {ty}")
    })
}

fn successors(t: &Term) -> Option<u64> {
    match t.unloc() {
        Term::Zero => Some(0),
        Term::Succ(p) => successors(p).map(|n| n + 1),
        _ => None,
    }
}

fn corpus_check() -> Outcome {
    let m = manifest();
    let files: Vec<&str> = m.positive().map(|e| e.path.as_str()).collect();
    let listed: Vec<String> = files
        .iter()
        .filter_map(|f| f.strip_prefix("stdlib/"))
        .map(String::from)
        .collect();
    let mut on_disk: Vec<String> = std::fs::read_dir(corpus().join("stdlib"))
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter(|n| n.ends_with(".hott"))
        .collect();
    on_disk.sort();
    let mut sorted = listed.clone();
    sorted.sort();
    ensure(sorted == on_disk, || {
        "the manifest does not list exactly the stdlib files".into()
    })?;
    ensure(files.len() >= 16, || format!("only {} positive files", files.len()))?;

    let mut args = vec!["check", "--path", "stdlib"];
    args.extend(&files);
    let start = Instant::now();
    let out = hott(&args);
    let elapsed = start.elapsed();
    let stdout = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.code() == Some(0), || {
        format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    ensure(
        stdout.lines().filter(|l| l.starts_with("ok ")).count() == files.len(),
        || format!("expected {} ok lines:\n{stdout}", files.len()),
    )?;
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;

    // Only the two axioms and the generated computation rules are assumed.
    let mut s = session();
    let mut postulates = Vec::new();
    for f in &listed {
        let c = load(&mut s, f)?;
        let betas: Vec<_> = c.globals.hits().flat_map(|h| h.beta_names.clone()).collect();
        for n in &c.names {
            if let Some(e) = c.globals.lookup(n) {
                if matches!(**e, Entry::Postulate { .. }) && !betas.contains(n) {
                    postulates.push(n.to_string());
                }
            }
        }
    }
    postulates.sort();
    ensure(postulates == ["funext", "univalence"], || {
        format!("unexpected postulates {postulates:?}")
    })?;
    Ok(format!("{} files in {:.2?}", files.len(), elapsed))
}

fn negative_corpus() -> Outcome {
    let m = manifest();
    let negs: Vec<_> = m.negative().collect();
    ensure(negs.len() >= 5, || format!("only {} negative files", negs.len()))?;
    for (e, class) in &negs {
        let out = hott(&["check", "--json", &e.path]);
        ensure(out.status.code() == Some(1), || {
            format!("{}: exit {:?}", e.path, out.status.code())
        })?;
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|err| format!("{}: {err}", e.path))?;
        let classes: Vec<&str> = v
            .as_array()
            .map(|a| a.iter().filter_map(|d| d["class"].as_str()).collect())
            .unwrap_or_default();
        ensure(
            !classes.is_empty() && classes.iter().all(|c| *c == class.as_str()),
            || format!("{}: expected {class}, got {classes:?}", e.path),
        )?;
    }
    let mut distinct: Vec<_> = negs.iter().map(|(_, c)| *c).collect();
    distinct.sort();
    distinct.dedup();
    Ok(format!("{} files, {} classes", negs.len(), distinct.len()))
}

fn j_computation() -> Outcome {
    let mut s = session();
    let c = load(&mut s, "j-computation.hott")?;
    for i in 1..=3 {
        let (j, base) = (format!("j-{i}"), format!("j-{i}-base"));
        let Some(Entry::Def { body, .. }) = c.globals.lookup(&j).map(|e| &**e) else {
            return Err(format!("`{j}` is not a definition"));
        };
        ensure(matches!(body.unloc(), Term::J { .. }), || {
            format!("`{j}` is not an application of J")
        })?;
        let a = normalize_const(&c.globals, &j).ok_or("missing")?;
        let b = normalize_const(&c.globals, &base).ok_or("missing")?;
        ensure(structural_eq(&a, &b), || {
            format!("`{j}` and `{base}` normalize differently")
        })?;
    }
    Ok("3 instances".into())
}

fn arithmetic() -> Outcome {
    let mut s = session();
    let c = load(&mut s, "nat.hott")?;
    for (name, expected, n) in [
        ("four", "succ (succ (succ (succ zero)))", 4),
        (
            "nine",
            "succ (succ (succ (succ (succ (succ (succ (succ (succ zero))))))))",
            9,
        ),
    ] {
        let t = normalize_const(&c.globals, name).ok_or("missing")?;
        ensure(successors(&t) == Some(n), || format!("`{name}` is not {n} successors"))?;
        let printed = s
            .normalize(&corpus().join("stdlib/nat.hott"), name)
            .map_err(|e| format!("{e:?}"))?;
        ensure(printed == expected, || format!("`{name}` prints as {printed}"))?;
    }
    proved_at(&c, "four", "Nat")?;
    let Some(Entry::Def { body, .. }) = c.globals.lookup("nine").map(|e| &**e) else {
        return Err("`nine` is not a definition".into());
    };
    ensure(format!("{body:?}").contains("mult"), || {
        "`nine` is not defined by mult".into()
    })?;
    Ok("plus 2 2 = 4, mult 3 3 = 9".into())
}

fn circle() -> Outcome {
    let mut s = session();
    let c = load(&mut s, "circle.hott")?;
    proved_at(&c, "omega-circle-is-int", "Equiv (Id S1 base base) Int")?;
    Ok("omega-circle-is-int : Equiv (Id S1 base base) Int".into())
}

fn truncations() -> Outcome {
    let mut s = session();
    let c = load(&mut s, "truncation.hott")?;
    proved_at(&c, "trunc-is-prop", "(A : U 0) -> isProp (Trunc A)")?;
    proved_at(&c, "trunc-is-ntype-1", "(A : U 0) -> isNType 1 (Trunc A)")?;
    proved_at(&c, "strunc-is-set", "(A : U 0) -> isSet (STrunc A)")?;
    proved_at(&c, "strunc-is-ntype-2", "(A : U 0) -> isNType 2 (STrunc A)")?;
    Ok("Trunc is a proposition, STrunc is a set".into())
}

fn transport_example() -> Outcome {
    let mut s = session();
    let c = load(&mut s, "transport-example.hott")?;
    proved_at(&c, "Q-same-c", "Q-same true = true in Bool")?;
    proved_at(&c, "Q-swapped-c", "Q-swapped true = false in Bool")?;
    proved_at(&c, "Q-swapped-d", "Q-swapped false = true in Bool")?;
    proved_at(
        &c,
        "transports-differ",
        "(x : Bool) -> Q-same x = Q-swapped x in Bool -> Empty",
    )?;
    proved_at(&c, "same-ne-swapped", "same = swapped in (Bool = Bool in U 0) -> Empty")?;
    Ok("the two transports of Q differ at every point".into())
}

/// Normalizes every definition body and re-normalizes the result at the
/// declared type. The second pass checks the normal form against that
/// type before reading it back.
fn kernel_properties() -> Outcome {
    let m = manifest();
    let mut s = session();
    let mut count = 0;
    for e in m.positive() {
        let file = e.path.strip_prefix("stdlib/").unwrap_or(&e.path);
        let c = load(&mut s, file)?;
        for n in &c.names {
            let Some(Entry::Def { ty, body, .. }) = c.globals.lookup(n).map(|e| &**e) else {
                continue;
            };
            let mut ck = Checker::new(&c.globals);
            let ctx = Ctx::new();
            let ty = Arc::new(ty.clone());
            let once = ck
                .normalize(&ctx, &Term::Ann(Arc::new(body.clone()), ty.clone()))
                .map_err(|d| format!("{file}: `{n}`: {d}"))?;
            let twice = ck
                .normalize(&ctx, &Term::Ann(Arc::new(once.clone()), ty))
                .map_err(|d| format!("{file}: `{n}`: normal form does not re-check: {d}"))?;
            ensure(structural_eq(&once, &twice), || {
                format!("{file}: `{n}`: normalization is not idempotent")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} definitions"))
}

fn full_run(json: bool) -> Vec<u8> {
    let m = manifest();
    let mut args = vec!["check", "--path", "stdlib"];
    if json {
        args.push("--json");
    }
    let mut bytes = Vec::new();
    for e in &m.entries {
        let mut a = args.clone();
        a.push(&e.path);
        let out = hott(&a);
        bytes.extend(format!("{:?}\n", out.status.code()).into_bytes());
        bytes.extend(out.stdout);
        bytes.extend(out.stderr);
    }
    bytes
}

fn determinism() -> Outcome {
    for json in [false, true] {
        let (a, b) = (full_run(json), full_run(json));
        ensure(a == b, || format!("two runs differ (json: {json})"))?;
    }
    Ok("human and JSON output byte-identical across runs".into())
}

fn universe_probe() -> Outcome {
    let out = hott(&["check", "--json", "tests/neg/universe.hott"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(1), || format!("exit {:?}", out.status.code()))?;
    ensure(v[0]["class"] == ErrorClass::UniverseError.as_str(), || {
        format!("got {v}")
    })?;
    let src = std::fs::read_to_string(corpus().join("tests/neg/universe.hott")).map_err(|e| e.to_string())?;
    ensure(src.contains("U 0 := U 0"), || {
        "the probe does not place U 0 in itself".into()
    })?;
    Ok("U 0 : U 0 rejected with UniverseError".into())
}

fn with_big_stack(f: fn() -> Outcome) -> Outcome {
    std::thread::Builder::new()
        .stack_size(1 << 30)
        .spawn(f)
        .expect("spawn")
        .join()
        .unwrap_or_else(|_| Err("panicked".into()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("corpus checks", corpus_check),
        ("negative corpus classes", negative_corpus),
        ("J computes on refl", j_computation),
        ("arithmetic canonicity", arithmetic),
        ("loops on the circle are the integers", circle),
        ("truncation levels", truncations),
        ("transport along two identifications", transport_example),
        ("normalization is idempotent and type preserving", kernel_properties),
        ("determinism", determinism),
        ("universe soundness probe", universe_probe),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.into_iter().enumerate() {
        match with_big_stack(f) {
            Ok(detail) => println!("PASS {:>2} {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {title}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
