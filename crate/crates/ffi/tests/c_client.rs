//! Builds a small C program against the generated header and the static
//! library.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "permdiff.h"

int main(void) {
    PermdiffPoly *f = NULL, *g = NULL;
    char *text = NULL;
    if (permdiff_poly_parse("bullet(x1, x2)", &f) != PERMDIFF_STATUS_OK) return 10;
    if (permdiff_poly_star(f, &g) != PERMDIFF_STATUS_OK) return 11;
    if (permdiff_poly_to_string(f, &text) != PERMDIFF_STATUS_OK) return 12;
    puts(text);
    permdiff_string_free(text);
    if (permdiff_poly_parse("x1 +", &f) != PERMDIFF_STATUS_SYNTAX) return 13;
    if (strstr(permdiff_last_error_message(), "column") == NULL) return 14;
    permdiff_poly_free(f);
    permdiff_poly_free(g);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests run from <target>/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let lib = target_dir().join("libpermdiff_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = dir.join("client.c");
    let exe = dir.join("client");
    fs::write(&src, PROGRAM).unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C build failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "client exited with {:?}", out.status);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "x1 x2' + x1' x2\n");
}
