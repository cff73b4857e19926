use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use twisted_gpt::{textio, FieldOps};

fn twgpt(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twgpt")).current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_random_message(dir: &Path, pub_file: &str, seed: u64) -> String {
    let pk = textio::read_public_key(&fs::read_to_string(dir.join(pub_file)).unwrap()).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let m: Vec<_> = (0..pk.k).map(|_| pk.field().random(&mut rng)).collect();
    let text = textio::write_vector(pk.field(), &m);
    fs::write(dir.join("msg.txt"), &text).unwrap();
    text
}

#[test]
fn gabidulin_pipeline_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let keygen = [
        "--seed", "11", "keygen", "--family", "gab", "--n", "12", "--k", "4", "--lambda", "2", "--s", "1", "--pub",
        "k.pub", "--sec", "k.sec",
    ];
    let o = twgpt(d, &keygen);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(stdout(&o), "keygen n=12 lambda=2 k=4 t=4 s=1\n");
    let msg = write_random_message(d, "k.pub", 5);
    assert!(twgpt(d, &["--seed", "2", "encrypt", "--pub", "k.pub", "--msg", "msg.txt", "--out", "c.txt"]).status.success());
    assert!(twgpt(d, &["decrypt", "--sec", "k.sec", "--ct", "c.txt", "--out", "m.txt"]).status.success());
    assert_eq!(fs::read_to_string(d.join("m.txt")).unwrap(), msg);

    let o = twgpt(d, &["--seed", "3", "attack", "overbeck", "k.pub", "--trials", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("trial=0 attack=overbeck success=true i="));
    assert!(out.contains("summary attack=overbeck trials=2 successes=2"));
}

#[test]
fn twisted_pipeline_and_attack_failure() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let keygen = ["--seed", "4", "keygen", "--family", "twisted", "--n", "8", "--k", "3", "--ell", "1", "--pub", "t.pub", "--sec", "t.sec"];
    assert!(twgpt(d, &keygen).status.success());
    assert!(fs::read_to_string(d.join("t.pub")).unwrap().contains("FIELD q=2 m=16 "));
    let msg = write_random_message(d, "t.pub", 6);
    assert!(twgpt(d, &["encrypt", "--pub", "t.pub", "--msg", "msg.txt", "--out", "c.txt"]).status.success());
    assert!(twgpt(d, &["decrypt", "--sec", "t.sec", "--ct", "c.txt", "--out", "m.txt"]).status.success());
    assert_eq!(fs::read_to_string(d.join("m.txt")).unwrap(), msg);

    let o = twgpt(d, &["attack", "overbeck", "t.pub"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("success=false i=1 dualdim=2"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dualdim=2"));

    let o = twgpt(d, &["--seed", "1", "attack", "exhaustive", "t.pub", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("work=10"));

    let o = twgpt(d, &["distinguish", "t.pub"]);
    assert_eq!(stdout(&o), "class=twisted_like(1)\ncritical_i=1 dual_dim=2 moore_structured=false\n");
    let o = twgpt(d, &["qsum-profile", "t.pub"]);
    assert_eq!(stdout(&o), "i=0 dim=3 inc=0\ni=1 dim=6 inc=3\ni=2 dim=8 inc=2\nclass=twisted_like(1)\n");
}

#[test]
fn tiny_guard_refuses_brute_force() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let keygen = ["--seed", "8", "keygen", "--family", "twisted", "--n", "8", "--k", "3", "--pub", "t.pub", "--sec", "t.sec"];
    assert!(twgpt(d, &keygen).status.success());
    write_random_message(d, "t.pub", 1);
    assert!(twgpt(d, &["encrypt", "--pub", "t.pub", "--msg", "msg.txt", "--out", "c.txt"]).status.success());
    let o = twgpt(d, &["--guard", "4", "decrypt", "--sec", "t.sec", "--ct", "c.txt", "--out", "m.txt"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn same_seed_same_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [a.path(), b.path()] {
        let keygen = ["--seed", "99", "keygen", "--family", "gab", "--n", "8", "--k", "4", "--lambda", "1", "--pub", "k.pub", "--sec", "k.sec"];
        assert!(twgpt(d, &keygen).status.success());
        write_random_message(d, "k.pub", 3);
        assert!(twgpt(d, &["--seed", "5", "encrypt", "--pub", "k.pub", "--msg", "msg.txt", "--out", "c.txt"]).status.success());
        let o = twgpt(d, &["--seed", "6", "attack", "exhaustive", "k.pub", "--trials", "3"]);
        fs::write(d.join("transcript.txt"), &o.stdout).unwrap();
    }
    for f in ["k.pub", "k.sec", "c.txt", "transcript.txt"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn validation_and_usage_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(twgpt(d, &["keygen", "--family", "gab", "--n", "8"]).status.code(), Some(1));
    let bad = ["keygen", "--family", "twisted", "--n", "8", "--k", "4", "--pub", "a", "--sec", "b"];
    let o = twgpt(d, &bad);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);
    fs::write(d.join("junk.pub"), "GPTPUB\nFIELD q=2 m=4 mod=1,1,0,0,1\n").unwrap();
    assert_eq!(twgpt(d, &["attack", "overbeck", "junk.pub"]).status.code(), Some(2));
}

#[test]
fn params_table_and_search() {
    let dir = tempfile::tempdir().unwrap();
    let o = twgpt(dir.path(), &["params", "table", "--paper"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 13);
    let o = twgpt(
        dir.path(),
        &["params", "search", "--n", "20..=30", "--k", "10..=25", "--ell", "2", "--lambda", "6", "--s", "1", "--min-bits", "80"],
    );
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l.split_whitespace().take(5).collect::<Vec<_>>() == ["twisted_gpt", "2", "18", "26", "104"]));
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = twgpt(dir.path(), &["--seed", "1", "selftest"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).matches("PASS").count(), 3);
}
