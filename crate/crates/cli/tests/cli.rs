use bextlab::barcx::{Bimodule, FinRing};
use bextlab::biext::{f2_trilinear, ButterflyCocycle};
use bextlab::cohom::{CocycleMode, CohomContext};
use bextlab::fingroup::{cyclic, trivial};
use bextlab::linalg::PivotOrder;
use bextlab::multiext::{z2_binary_family, z2_unary_family, z2_wing, MultiExt};
use bextlab::xmod::{BraidedXMod, XMod};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

struct Scratch(PathBuf);

impl Scratch {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("bextlab-cli-{}-{name}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn path(&self, file: &str) -> PathBuf {
        self.0.join(file)
    }

    fn put<T: Serialize>(&self, file: &str, kind: &str, data: &T) -> PathBuf {
        let p = self.path(file);
        let doc = json!({"format": 1, "kind": kind, "data": data});
        std::fs::write(&p, serde_json::to_string(&doc).unwrap()).unwrap();
        p
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn bextlab(args: &[&Path]) -> Output {
    bextlab_env(args, None)
}

fn bextlab_env(args: &[&Path], max: Option<&str>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_bextlab"));
    c.args(args);
    match max {
        Some(v) => c.env("BEXTLAB_MAX_SEARCH", v),
        None => c.env_remove("BEXTLAB_MAX_SEARCH"),
    };
    c.output().unwrap()
}

fn p(s: &str) -> &Path {
    Path::new(s)
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn w_trivial() -> BraidedXMod {
    BraidedXMod::trivial(z2_wing())
}

#[test]
fn validate_exit_codes() {
    let s = Scratch::new("validate");
    let good = s.put("x.json", "xmod", &XMod::identity(&cyclic(2)));
    let o = bextlab(&[p("validate"), &good]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["format"], 1);
    assert_eq!(v["passed"], true);

    let mut bad = f2_trilinear();
    bad.g2[0][1][1] ^= 1;
    let bad = s.put("b.json", "biext", &bad);
    let o = bextlab(&[p("validate"), &bad]);
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    let failing: Vec<&Value> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .collect();
    assert!(
        failing
            .iter()
            .any(|c| c["id"] == "eq20" && c["counterexample"].is_array()),
        "{v}"
    );

    let junk = s.path("junk.json");
    std::fs::write(&junk, "{ not json").unwrap();
    assert_eq!(code(&bextlab(&[p("validate"), &junk])), 2);
    let old = s.path("old.json");
    std::fs::write(&old, r#"{"format": 7, "kind": "ring", "data": {}}"#).unwrap();
    assert_eq!(code(&bextlab(&[p("validate"), &old])), 2);
    assert_eq!(code(&bextlab(&[p("validate"), &s.path("missing.json")])), 2);
    let wrong = s.put("w.json", "ring", &json!({"add": 3}));
    assert_eq!(code(&bextlab(&[p("validate"), &wrong])), 2);
}

#[test]
fn compose_and_iso() {
    let s = Scratch::new("compose");
    let coeff = w_trivial();
    let e = z2_binary_family(&coeff).swap_remove(3);
    let id = MultiExt::identity(&coeff).unwrap();
    let ep = s.put("e.json", "multiext", &e);
    let ip = s.put("id.json", "multiext", &id);
    let out = s.path("c.json");
    let o = bextlab(&[p("compose"), &ep, &ip, &ip, p("--out"), &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["arity"], 2);
    let o = bextlab(&[p("iso"), &out, &ep]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["isomorphic"], true);

    let un = s.put("u.json", "multiext", &z2_unary_family(&coeff)[1]);
    let o = bextlab(&[p("compose"), &ep, &ep, &un, p("--out"), &out]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["arity"], 3);

    let tri = MultiExt::from_cocycle(&ButterflyCocycle::with_trivial_wings(f2_trilinear())).unwrap();
    let tp = s.put("t.json", "multiext", &tri);
    assert_eq!(code(&bextlab(&[p("compose"), &tp, &ip, &ip, p("--out"), &out])), 1);
}

#[test]
fn homology_examples_and_size_bound() {
    let s = Scratch::new("homology");
    let z2 = s.put("z2.json", "ring", &FinRing::zn(2));
    let z3 = s.put("z3.json", "ring", &FinRing::zn(3));
    let args = |r: &Path| -> Vec<PathBuf> {
        [
            "homology",
            "--ring",
            r.to_str().unwrap(),
            "--level",
            "3",
            "--degree",
            "2",
        ]
        .iter()
        .map(PathBuf::from)
        .collect()
    };
    let run = |r: &Path, max: Option<&str>| {
        let a = args(r);
        let refs: Vec<&Path> = a.iter().map(PathBuf::as_path).collect();
        bextlab_env(&refs, max)
    };
    let o = run(&z2, None);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["factors"], json!([2]));
    assert_eq!(stdout_json(&run(&z3, None))["factors"], json!([]));
    let o = run(&z2, Some("10"));
    assert_eq!(code(&o), 3);

    let cx = s.path("cx.json");
    let o = bextlab(&[
        p("homology"),
        p("--ring"),
        &z2,
        p("--level"),
        p("2"),
        p("--degree"),
        p("2"),
        p("--out"),
        &cx,
    ]);
    assert_eq!(stdout_json(&o)["factors"], json!([4]));
    let o = bextlab(&[p("homology"), p("--complex"), &cx, p("--degree"), p("2")]);
    assert_eq!(stdout_json(&o)["factors"], json!([4]));
}

#[test]
fn cohomology_groups() {
    let s = Scratch::new("cohomology");
    let ring = FinRing::zn(2);
    let rp = s.put("r.json", "ring", &ring);
    let zero = s.put("m0.json", "bimodule", &Bimodule::zero_action(&ring, &trivial()));
    let o = bextlab(&[p("cohomology"), p("--ring"), &rp, p("--module"), &zero]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["factors"], json!([]));

    let z4 = FinRing::zn(4);
    let rp = s.put("r4.json", "ring", &z4);
    let mp = s.put("m4.json", "bimodule", &Bimodule::regular(&z4));
    for mode in ["h3_3", "twisted"] {
        let o = bextlab(&[
            p("cohomology"),
            p("--ring"),
            &rp,
            p("--module"),
            &mp,
            p("--mode"),
            p(mode),
        ]);
        let v = stdout_json(&o);
        assert_eq!(v["factors"], json!([2]));
        assert_eq!(v["representatives"].as_array().unwrap().len(), 1);
    }
    let o = bextlab_env(&[p("cohomology"), p("--ring"), &rp, p("--module"), &mp], Some("5"));
    assert_eq!(code(&o), 3);
}

#[test]
fn catring_pipeline() {
    let s = Scratch::new("catring");
    let ring = FinRing::zero_mult(2);
    let module = Bimodule::regular(&ring);
    let ctx = CohomContext::new(&ring, &module).unwrap();
    let solver = ctx.solver(CocycleMode::Twisted, PivotOrder::First);
    let xi = ctx.from_vector(&solver.representative(0));
    let rp = s.put("r.json", "ring", &ring);
    let mp = s.put("m.json", "bimodule", &module);
    let xp = s.put("xi.json", "cocycle", &xi);
    let (pres, mono) = (s.path("p.json"), s.path("mono.json"));
    let o = bextlab(&[
        p("reconstruct"),
        p("--cocycle"),
        &xp,
        p("--ring"),
        &rp,
        p("--module"),
        &mp,
        p("--out-presentation"),
        &pres,
        p("--out-monoid"),
        &mono,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&bextlab(&[p("validate"), &pres])), 0);
    let o = bextlab(&[p("validate"), &mono, p("--presentation"), &pres]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(
        code(&bextlab(&[
            p("pentagon"),
            p("--presentation"),
            &pres,
            p("--monoid"),
            &mono
        ])),
        0
    );

    let back = s.path("back.json");
    let o = bextlab(&[
        p("decompose"),
        p("--presentation"),
        &pres,
        p("--monoid"),
        &mono,
        p("--out"),
        &back,
    ]);
    assert_eq!(code(&o), 0);
    let class = stdout_json(&o)["class"].clone();
    assert_ne!(class, json!([0, 0, 0, 0]));
    let o = bextlab(&[p("class"), p("--presentation"), &pres, p("--monoid"), &mono]);
    assert_eq!(stdout_json(&o)["class"], class);
    let o = bextlab(&[p("class"), p("--cocycle"), &xp, p("--ring"), &rp, p("--module"), &mp]);
    assert_eq!(stdout_json(&o)["class"], class);
    let o = bextlab(&[p("class"), p("--cocycle"), &back, p("--presentation"), &pres]);
    assert_eq!(stdout_json(&o)["class"], class);

    let mut broken = xi.clone();
    broken.f[1][1][1] ^= 1;
    broken.alpha1[1][1][1] ^= 1;
    broken.alpha2[0][1][1] ^= 1;
    let bp = s.put("bad.json", "cocycle", &broken);
    let o = bextlab(&[
        p("reconstruct"),
        p("--cocycle"),
        &bp,
        p("--skeleton"),
        &pres,
        p("--out-presentation"),
        &pres,
        p("--out-monoid"),
        &mono,
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn outputs_are_deterministic() {
    let s = Scratch::new("determinism");
    let ring = FinRing::zn(3);
    let rp = s.put("r.json", "ring", &ring);
    let mp = s.put("m.json", "bimodule", &Bimodule::zero_action(&ring, &cyclic(3)));
    let run = || {
        bextlab(&[
            p("cohomology"),
            p("--ring"),
            &rp,
            p("--module"),
            &mp,
            p("--mode"),
            p("h3_2"),
        ])
        .stdout
    };
    assert_eq!(run(), run());
    let coeff = w_trivial();
    let ep = s.put("e.json", "multiext", &z2_binary_family(&coeff)[5]);
    let ip = s.put("id.json", "multiext", &MultiExt::identity(&coeff).unwrap());
    let (a, b) = (s.path("a.json"), s.path("b.json"));
    bextlab(&[p("compose"), &ep, &ip, &ip, p("--out"), &a]);
    bextlab(&[p("compose"), &ep, &ip, &ip, p("--out"), &b]);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}
