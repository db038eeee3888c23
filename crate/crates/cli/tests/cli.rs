use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::sync::OnceLock;

const BIN: &str = env!("CARGO_BIN_EXE_hammerforge");

fn mini_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/mini.mg")
}

/// The core crate's mock prover, built on demand.
fn mock_prover() -> &'static Path {
    static PATH: OnceLock<PathBuf> = OnceLock::new();
    PATH.get_or_init(|| {
        let dir = Path::new(BIN).parent().unwrap();
        let path = dir.join("hammerforge-mock-prover");
        if !path.exists() {
            let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
            let ok = Command::new(cargo)
                .args([
                    "build",
                    "-p",
                    "hammerforge-core",
                    "--bin",
                    "hammerforge-mock-prover",
                ])
                .status()
                .unwrap()
                .success();
            assert!(ok && path.exists(), "could not build the mock prover");
        }
        path
    })
}

fn registry(dir: &Path, table: &str) -> PathBuf {
    let table_path = dir.join("table.json");
    std::fs::write(&table_path, table).unwrap();
    let reg = dir.join("provers.toml");
    let text = format!(
        "[[prover]]\nname = \"mock\"\npath = {:?}\nargs = [\"--table\", {:?}, \"{{file}}\"]\ndialect = \"th0\"\n\n\
         [schedule.quick]\nbudget = 5.0\nslices = [{{ prover = \"mock\", seconds = 5.0 }}]\n",
        mock_prover(),
        table_path
    );
    std::fs::write(&reg, text).unwrap();
    reg
}

fn hf(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("HAMMERFORGE_PROVERS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_reports_counts_and_errors() {
    let mini = mini_path();
    let o = hf(&["check", s(&mini)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(
        stdout(&o).contains("15 theorem(s), 0 aby call(s)"),
        "{}",
        stdout(&o)
    );

    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.mg");
    let text = std::fs::read_to_string(&mini).unwrap().replacen(
        "ordinal (ordsucc alpha).\n{",
        "ordinal ordsucc.\n{",
        1,
    );
    std::fs::write(&bad, text).unwrap();
    let o = hf(&["check", s(&bad)]);
    assert!(!o.status.success());
    assert!(
        stderr(&o).contains("bad.mg:27:12: type mismatch"),
        "{}",
        stderr(&o)
    );

    let o = hf(&["--require-xm-proof", "check", s(&mini)]);
    assert!(!o.status.success());
}

#[test]
fn pipeline_from_script_to_report() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let mini = mini_path();
    let problems = dir.join("problems");
    let o = hf(&["bushy", s(&mini), "-o", s(&problems)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let count = std::fs::read_dir(&problems)
        .unwrap()
        .filter(|e| {
            e.as_ref()
                .unwrap()
                .path()
                .to_string_lossy()
                .ends_with(".th0.p")
        })
        .count();
    assert!(problems.join("bushy_nat_1_0.th0.p").exists());
    assert!(
        stdout(&o).starts_with(&format!("{} problem(s)", count)),
        "{}",
        stdout(&o)
    );

    let reg = registry(dir, r#"{"*": {}}"#);
    let results = dir.join("results.jsonl");
    let o = hf(&[
        "--jobs",
        "4",
        "solve",
        s(&problems),
        "--registry",
        s(&reg),
        "--timeout",
        "5",
        "--results",
        s(&results),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(
        stdout(&o).starts_with(&format!("{}/{} problem(s) solved", count, count)),
        "{}",
        stdout(&o)
    );

    let out = dir.join("min.mg");
    let o = hf(&[
        "minimize",
        s(&mini),
        "--results",
        s(&results),
        "-o",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = hf(&["check", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));

    let o = hf(&[
        "report",
        s(&results),
        "--mode",
        "bushy",
        "--original",
        s(&mini),
        "--rewritten",
        s(&out),
        "--json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["union"]["percentage"], "100.0%");
    assert_eq!(rep["problems"], count);
    assert!(rep["text"]["rewritten_chars"].as_u64() < rep["text"]["original_chars"].as_u64());

    let o = hf(&["report", s(&results), "--mode", "bushy"]);
    assert!(stdout(&o).contains("union"), "{}", stdout(&o));

    let o = hf(&[
        "verify",
        s(&out),
        "--registry",
        s(&reg),
        "--schedule",
        "quick",
        "--workdir",
        s(&dir.join("v")),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(
        stdout(&o).lines().all(|l| l.contains("\tjustified\t")),
        "{}",
        stdout(&o)
    );
}

#[test]
fn literal_definitions_still_solve() {
    let tmp = tempfile::tempdir().unwrap();
    let problems = tmp.path().join("p");
    let o = hf(&[
        "chainy",
        s(&mini_path()),
        "-o",
        s(&problems),
        "--literal-defs",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let reg = registry(tmp.path(), r#"{"*": {}}"#);
    let o = hf(&[
        "solve",
        s(&problems),
        "--registry",
        s(&reg),
        "--timeout",
        "5",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(problems.join("results.jsonl").exists());
}

const DK: &str = r#"
{|axiom_ordinal_5Fordsucc9|}:
  Prf (forall iota (0 : El iota => (imp ({|ordinal|} 0) ({|ordinal|} ({|ordsucc|} 0))))).
{|axiom_c_Ha16|}: Prf ({|ordinal|} {|alpha|}).
{|axiom_18|}: Prf (not ({|ordinal|} ({|ordsucc|} {|alpha|}))).
"#;

#[test]
fn reconstruct_exit_status_reflects_holes() {
    let tmp = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(mini_path()).unwrap().replace(
        "{ exact ordinal_ordsucc alpha Ha. }",
        "{ aby ordinal_ordsucc Ha. }",
    );
    let at = text.find("aby ordinal_ordsucc").unwrap() + 2;
    let script = tmp.path().join("s.mg");
    std::fs::write(&script, &text).unwrap();

    let full = tmp.path().join("full.dk");
    std::fs::write(
        &full,
        format!("{}def s1 : Prf false := {{|axiom_18|}} ({{|axiom_ordinal_5Fordsucc9|}} {{|alpha|}} {{|axiom_c_Ha16|}}).\n", DK),
    )
    .unwrap();
    let at_s = at.to_string();
    let o = hf(&[
        "reconstruct",
        s(&full),
        "--script",
        s(&script),
        "--goal-at",
        &at_s,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(
        stdout(&o).contains("steps 1, checked 1, holes 0"),
        "{}",
        stdout(&o)
    );

    let holey = tmp.path().join("holey.dk");
    std::fs::write(
        &holey,
        format!(
            "{}def s1 : Prf false := {{|axiom_18|}} (clausify {{|axiom_c_Ha16|}}).\n",
            DK
        ),
    )
    .unwrap();
    let o = hf(&[
        "reconstruct",
        s(&holey),
        "--script",
        s(&script),
        "--goal-at",
        &at_s,
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["audit"]["holes"], 1);

    let o = hf(&[
        "reconstruct",
        s(&full),
        "--script",
        s(&script),
        "--goal-at",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn serve_over_stdio() {
    let tmp = tempfile::tempdir().unwrap();
    let reg = registry(tmp.path(), r#"{"*": {}}"#);
    let mut child = Command::new(BIN)
        .args([
            "serve",
            "--stdio",
            "--registry",
            s(&reg),
            "--workdir",
            s(&tmp.path().join("w")),
        ])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stdin = child.stdin.take().unwrap();
    let mut out = BufReader::new(child.stdout.take().unwrap());
    writeln!(stdin, r#"{{"id":1,"method":"open","params":{{"text":"Theorem t : True.\nexact TrueI.\nQed.\n"}}}}"#).unwrap();
    writeln!(
        stdin,
        r#"{{"id":2,"method":"checkPrefix","params":{{"session":1}}}}"#
    )
    .unwrap();
    drop(stdin);
    let mut lines = Vec::new();
    let mut line = String::new();
    while out.read_line(&mut line).unwrap() > 0 {
        lines.push(std::mem::take(&mut line));
    }
    assert!(child.wait().unwrap().success());
    assert_eq!(
        lines[0].trim(),
        r#"{"id":1,"result":{"revision":0,"session":1}}"#
    );
    assert_eq!(
        lines[1].trim(),
        r#"{"id":2,"result":{"diagnostics":[],"holes":0,"revision":0}}"#
    );
}
