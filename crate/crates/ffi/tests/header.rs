use std::path::{Path, PathBuf};
use std::process::Command;

const EXPORTS: [&str; 14] = [
    "ngt_last_error",
    "ngt_version",
    "ngt_run_options_default",
    "ngt_script_parse",
    "ngt_script_free",
    "ngt_script_print",
    "ngt_run",
    "ngt_report_free",
    "ngt_report_json",
    "ngt_report_text",
    "ngt_report_len",
    "ngt_report_verdict",
    "ngt_report_exit_code",
    "ngt_string_free",
];

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/nagata.h")
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in EXPORTS {
        assert!(text.contains(&format!("{name}(")), "{name} missing from header");
    }
    for code in ["NGT_STATUS_OK = 0", "NGT_STATUS_PARSE_ERROR = 3", "NGT_STATUS_PANIC = 5"] {
        assert!(text.contains(code), "{code} missing from header");
    }
    assert!(text.contains("typedef struct NgtScript NgtScript;"));
    assert!(text.contains("typedef struct NgtReport NgtReport;"));
}

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "nagata.h"

int main(void) {
    NgtScript *script = NULL;
    if (ngt_script_parse("precision 4\ncheck bogus G : x\n", &script) != NGT_STATUS_PARSE_ERROR) return 10;
    if (strstr(ngt_last_error(), "line 2") == NULL) return 11;
    const char *text =
        "field F5\nprecision 8\nring T = poly(t)\nring L = local(T, order=4)\n"
        "check emb-dim L : expected=1\n";
    if (ngt_script_parse(text, &script) != NGT_STATUS_OK) return 12;
    NgtRunOptions opts = ngt_run_options_default();
    opts.timing = false;
    NgtReport *report = NULL;
    if (ngt_run(script, &opts, &report) != NGT_STATUS_OK) return 13;
    NgtVerdict v;
    if (ngt_report_len(report) != 1 || ngt_report_verdict(report, 0, &v) != NGT_STATUS_OK) return 14;
    if (v != NGT_VERDICT_PASS || ngt_report_exit_code(report, true) != 0) return 15;
    char *json = NULL;
    if (ngt_report_json(report, &json) != NGT_STATUS_OK) return 16;
    printf("%s\n", json);
    ngt_string_free(json);
    ngt_report_free(report);
    ngt_script_free(script);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<this test>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let mut build = Command::new(env!("CARGO"));
    build.args(["build", "-p", "nagata-ffi", "--lib"]);
    if target_dir().file_name().is_some_and(|p| p == "release") {
        build.arg("--release");
    }
    assert!(build.status().unwrap().success(), "building the static library failed");
    let lib = target_dir().join("libnagata_ffi.a");
    let dir = std::env::temp_dir().join(format!("nagata-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    let exe = dir.join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"verdict\": \"pass\""));
    std::fs::remove_dir_all(&dir).ok();
}
