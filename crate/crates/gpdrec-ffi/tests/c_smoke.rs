//! Compile and run a small C program against the generated header and the
//! static library, exercising the whole scramble/reconstruct path from C.

use std::path::PathBuf;
use std::process::Command;

const C_SOURCE: &str = r#"
#include <stdio.h>
#include <string.h>
#include "gpdrec.h"

int main(void) {
    const char *instance_json =
        "{\"ring\": {\"mod\": 2}, \"groupoid\": {\"pair\": 2}}";
    GpdInstance *inst = gpdrec_instance_parse(instance_json);
    if (!inst) return 10;

    GpdPresentation *pres = NULL;
    if (gpdrec_scramble(inst, 7, &pres) != GPD_STATUS_OK) return 11;

    bool holds = false;
    if (gpdrec_lbh_check(pres, 10000, &holds) != GPD_STATUS_OK) return 12;
    if (!holds) return 13;

    char *out = NULL;
    if (gpdrec_reconstruct(pres, 10000, &out) != GPD_STATUS_OK) return 14;
    if (!strstr(out, "explicit")) return 15;
    gpdrec_string_free(out);

    if (gpdrec_roundtrip(inst, 0, 2, 10000) != GPD_STATUS_OK) return 16;

    gpdrec_presentation_free(pres);
    gpdrec_instance_free(inst);
    printf("c-abi ok, version %s\n", gpdrec_version());
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    let target_dir = std::env::var("CARGO_TARGET_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|_| manifest.join("../../target"));
    let profile_dir = target_dir.join(if cfg!(debug_assertions) {
        "debug"
    } else {
        "release"
    });
    let staticlib = profile_dir.join("libgpdrec_ffi.a");
    assert!(
        staticlib.exists(),
        "staticlib missing at {}",
        staticlib.display()
    );

    let work = std::env::temp_dir().join(format!("gpdrec_c_smoke_{}", std::process::id()));
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("smoke.c");
    std::fs::write(&src, C_SOURCE).unwrap();
    let bin = work.join("smoke");

    let compile = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(staticlib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&bin)
        .output()
        .expect("cc is available");
    assert!(
        compile.status.success(),
        "compile failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&bin).output().expect("smoke binary runs");
    assert!(
        run.status.success(),
        "smoke binary exited {:?}: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stdout)
    );
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("c-abi ok"));
    std::fs::remove_dir_all(&work).ok();
}
