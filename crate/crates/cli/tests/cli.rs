use std::path::PathBuf;
use std::process::{Command, Output};

fn lingware() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/lingware")
}

fn bilex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bilex"))
        .arg("--lingware")
        .arg(lingware())
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bilex-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, content).unwrap();
    p
}

#[test]
fn translate_prints_the_best_output() {
    let o = bilex(&["translate", "John", "likes", "Mary"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "Juan ama a María\n");
}

#[test]
fn all_flag_lists_every_output() {
    let o = bilex(&["translate", "--all", "John kicked the bucket"]);
    assert_eq!(stdout(&o), "Juan estiró la pata\nJuan pateó el cubo\n");
}

#[test]
fn reverse_direction() {
    let o = bilex(&["--from", "spanish", "--to", "english", "translate", "Juan tiene sed"]);
    assert_eq!(stdout(&o), "John is thirsty\n");
}

#[test]
fn parse_failure_sets_the_exit_status() {
    let o = bilex(&["translate", "John saw the zebra"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("zebra"));
}

#[test]
fn bad_configuration_is_reported() {
    let o = bilex(&["--to", "english", "translate", "John"]);
    assert_eq!(o.status.code(), Some(5));
    let o = bilex(&["--trace", "lexer", "translate", "John"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn shipped_corpus_checks_clean() {
    let corpus = lingware().join("corpus.tsv");
    let o = bilex(&["check", corpus.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("16 passed, 0 failed\n"));
}

#[test]
fn mismatch_fails_the_check() {
    let p = scratch("bad.tsv", "John likes Mary\tMaría ama a Juan\tmember\n");
    let o = bilex(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn malformed_corpus_names_the_line() {
    let p = scratch("broken.tsv", "# comment\nJohn likes Mary\n");
    let o = bilex(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn json_report_has_one_record_per_line() {
    let p = scratch(
        "two.tsv",
        "John likes Mary\tJuan ama a María\tmember\nJohn is thirsty\tJuan tiene sed\tfirst\n",
    );
    let o = bilex(&["--report", "json", "check", p.to_str().unwrap()]);
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["pass"], true);
    assert_eq!(lines[1]["mode"], "first");
    assert_eq!(lines[2]["passed"], 2);
}

#[test]
fn expand_lists_derived_entries() {
    let o = bilex(&["expand"]);
    let text = stdout(&o);
    for tree in ["almendro1", "manzano1", "cerezo1", "naranjo1", "ciruelo1", "limonero1"] {
        assert!(text.contains(&format!("<-> {tree}(z)  [fruit-tree")), "{tree}");
    }
    let o = bilex(&["expand", "--depth", "0"]);
    assert!(!stdout(&o).contains(" <- "));
}

#[test]
fn parse_prints_skolemized_analyses() {
    let o = bilex(&["parse", "John likes Mary"]);
    assert_eq!(stdout(&o), "john1(1) love1(2,1,3) mary1(3)\n");
}

#[test]
fn generate_reads_a_bag_file() {
    let p = scratch("bag.txt", "maría1(1) amar1(2,1,3){syn.tense=pres}\n# object\na1(3) juan1(3)\n");
    let o = bilex(&["generate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "María ama a Juan\n");
}

#[test]
fn unrealizable_bag_is_a_generation_failure() {
    let p = scratch("untensed.txt", "juan1(1) amar1(2,1,3) a1(3) maría1(3)\n");
    let o = bilex(&["generate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stdin_lines_are_translated_in_order() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_bilex"))
        .arg("--lingware")
        .arg(lingware())
        .arg("translate")
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"Mary swam\nJohn likes Mary\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o), "María nadó\nJuan ama a María\n");
}
