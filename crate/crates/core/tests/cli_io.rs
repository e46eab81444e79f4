use std::path::Path;
use std::process::Command;

use sgweno::cli::dump::{decode, encode, read_dump, write_dump, HEADER_BYTES, MAGIC};
use sgweno::cli::{emit_table, TableRow};
use sgweno::diag::error_reports;
use sgweno::grid::{Boundary, DomainBox, GridField, GridGeometry, LevelIndex};

fn sgweno() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sgweno"))
}

fn small_run(dir: &Path) -> std::process::Output {
    sgweno()
        .args(["run", "--example", "ex1", "--nr", "6", "--nl", "1", "--tfinal", "0.05", "--snapshots", "0.02,0.05"])
        .arg("--out")
        .arg(dir)
        .output()
        .unwrap()
}

#[test]
fn table_rows_use_the_published_layout() {
    let reports = error_reports(&[(3.1556e-07, 4.9572e-07), (9.9122e-09, 1.5558e-08)]);
    let rows: Vec<TableRow> = reports
        .into_iter()
        .zip([80, 160])
        .map(|(report, grid)| TableRow { grid, report, wall_seconds: 0.998 })
        .collect();
    let text = emit_table(&rows);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "grid,l1,l1_order,linf,linf_order,wall_seconds");
    assert_eq!(lines[1], "80,3.1556e-07,,4.9572e-07,,9.98000e-01");
    assert!(lines[2].starts_with("160,9.9122e-09,4.993,1.5558e-08,4.994,"));
}

#[test]
fn dumps_round_trip_exactly() {
    let g = GridGeometry::new(
        DomainBox::new(vec![0.0, -1.0, 2.0], vec![1.0, 1.0, 3.0]).unwrap(),
        vec![6, 7, 8],
        LevelIndex::new(vec![1, 0, 2]),
        vec![Boundary::Periodic, Boundary::Zero, Boundary::Periodic],
    )
    .unwrap();
    let f = GridField::restrict(g.clone(), |x| (3.0 * x[0]).sin() + x[1] * x[2] - 1e-300);
    let bytes = encode(&f).unwrap();
    assert_eq!(&bytes[..4], MAGIC);
    assert_eq!(bytes.len(), HEADER_BYTES + 8 * f.len());
    let d = decode(&bytes, "mem").unwrap();
    assert_eq!(d.extents, g.shape());
    assert_eq!(d.spacings, g.spacings());
    assert!(d.values.iter().zip(f.as_slice()).all(|(a, b)| a.to_bits() == b.to_bits()));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.bin");
    write_dump(&path, &f).unwrap();
    assert_eq!(read_dump(&path).unwrap(), d);

    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(decode(&bad, "mem").is_err());
    assert!(decode(&bytes[..HEADER_BYTES + 8], "mem").is_err());
}

#[test]
fn run_writes_every_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = small_run(dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("grid,l1,l1_order,linf,linf_order,wall_seconds\n12,"));
    for name in [
        "table.csv",
        "timeseries.csv",
        "run.csv",
        "snapshot_000.bin",
        "snapshot_001.bin",
        "cut_000.csv",
        "plane_001.csv",
    ] {
        assert!(dir.path().join(name).is_file(), "missing {name}");
    }
    let series = std::fs::read_to_string(dir.path().join("timeseries.csv")).unwrap();
    assert_eq!(series.lines().next(), Some("t,mass,min,max,h2,hlog"));
    assert_eq!(series.lines().count(), 4);
    let snap = read_dump(&dir.path().join("snapshot_001.bin")).unwrap();
    assert_eq!(snap.extents, vec![12, 12]);
}

#[test]
fn comparing_a_run_with_itself_gives_zero_difference() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(small_run(dir.path()).status.code(), Some(0));
    let out = sgweno().arg("compare").arg(dir.path()).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "item,l1,linf,ratio");
    assert_eq!(lines[1], "snapshot_000,0.0000e+00,0.0000e+00,");
    assert_eq!(lines[2], "snapshot_001,0.0000e+00,0.0000e+00,");
    assert_eq!(lines[3], "wall,,,1.0000e+00");
}

#[test]
fn comparing_different_examples_is_refused() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(small_run(a.path()).status.code(), Some(0));
    let out = sgweno()
        .args(["run", "--example", "ex3a", "--nr", "6", "--nl", "1", "--tfinal", "0.05", "--snapshots", "0.02,0.05"])
        .arg("--out")
        .arg(b.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = sgweno().arg("compare").arg(a.path()).arg(b.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_configurations_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["run", "--example", "ex9"][..],
        &["run", "--example", "ex1", "--cfl", "1.5"],
        &["run", "--example", "ex1", "--nr", "3"],
        &["run", "--example", "ex1", "--epsilon", "0"],
        &["run", "--example", "ex1", "--scheme", "eno"],
        &["run", "--example", "ex1", "--snapshots", "0.1,9"],
        &["run", "--example", "ex1", "--tfinal", "-1"],
        &["--threads", "0", "run", "--example", "ex1"],
        &["run", "--bogus"],
    ] {
        let out = sgweno().args(args).arg("--out").arg(dir.path()).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn blow_up_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = sgweno()
        .args(["run", "--example", "ex3a", "--grid-mode", "single", "--nr", "6", "--nl", "0"])
        .args(["--dt-mode", "accuracy", "--tfinal", "20"])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("integrator failure"));
}
