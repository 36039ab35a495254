use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use lsbstego_cli::run;
use lsbstego_core::{encode, Image, ImagePlane, RgbImage};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tempfile::TempDir;

struct Output {
    code: u8,
    stdout: String,
    stderr: String,
}

impl Output {
    fn value(&self, key: &str) -> &str {
        self.stdout
            .lines()
            .find_map(|l| l.strip_prefix(key)?.strip_prefix(": "))
            .unwrap_or_else(|| panic!("no {key} in {:?}", self.stdout))
    }
}

fn lsbstego(args: &[&str]) -> Output {
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let code = run(
        std::iter::once("lsbstego").chain(args.iter().copied()),
        &mut stdout,
        &mut stderr,
    );
    Output {
        code,
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn random_bytes(rng: &mut StdRng, len: usize) -> Vec<u8> {
    let mut v = vec![0u8; len];
    rng.fill(v.as_mut_slice());
    v
}

fn write_gray(dir: &Path, name: &str, w: usize, h: usize, rng: &mut StdRng) -> PathBuf {
    let path = dir.join(name);
    let plane = ImagePlane::new(w, h, random_bytes(rng, w * h)).unwrap();
    fs::write(&path, encode(&plane.into())).unwrap();
    path
}

fn write_rgb(dir: &Path, name: &str, w: usize, h: usize, rng: &mut StdRng) -> PathBuf {
    let path = dir.join(name);
    let img = RgbImage::from_interleaved(w, h, &random_bytes(rng, 3 * w * h)).unwrap();
    fs::write(&path, encode(&img.into())).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn embed_paper_sized_payload_into_large_pgm() {
    let dir = TempDir::new().unwrap();
    let mut rng = StdRng::seed_from_u64(1);
    let cover = write_gray(dir.path(), "cover.pgm", 1024, 768, &mut rng);
    let payload = dir.path().join("payload.bin");
    fs::write(&payload, random_bytes(&mut rng, 56)).unwrap();
    let stego = dir.path().join("stego.pgm");

    let out = lsbstego(&["embed", "--cover", s(&cover), "--payload", s(&payload), "--out", s(&stego)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.value("embedded_bytes"), "56");
    assert_eq!(out.value("capacity_used"), "64/196608");
    assert!(out.value("psnr_db").parse::<f64>().unwrap() >= 38.5884);
    assert!(fs::read(&stego).unwrap().starts_with(b"P5\n1024 768\n255\n"));

    let recovered = dir.path().join("recovered.bin");
    let out = lsbstego(&["extract", "--stego", s(&stego), "--out", s(&recovered)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.value("extracted_bytes"), "56");
    assert_eq!(fs::read(&recovered).unwrap(), fs::read(&payload).unwrap());

    let out = lsbstego(&["psnr", "--ref", s(&cover), "--test", s(&stego)]);
    assert_eq!(out.code, 0);
    let db: f64 = out.value("psnr_db").parse().unwrap();
    assert!(db >= 38.5884);
    assert_eq!(out.value("psnr_db").split('.').nth(1).unwrap().len(), 4);
}

#[test]
fn embed_error_codes() {
    let dir = TempDir::new().unwrap();
    let mut rng = StdRng::seed_from_u64(2);
    let narrow = write_gray(dir.path(), "narrow.pgm", 3, 50, &mut rng);
    let cover = write_gray(dir.path(), "cover.pgm", 64, 4, &mut rng);
    let payload = dir.path().join("p.bin");
    fs::write(&payload, b"x").unwrap();
    let out_path = dir.path().join("o.pgm");

    let out = lsbstego(&["embed", "--cover", s(&narrow), "--payload", s(&payload), "--out", s(&out_path)]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("9 bytes needed"), "{}", out.stderr);
    assert!(out.stderr.contains("0 bytes available"), "{}", out.stderr);

    let missing = dir.path().join("missing.bin");
    let out = lsbstego(&["embed", "--cover", s(&cover), "--payload", s(&missing), "--out", s(&out_path)]);
    assert_eq!(out.code, 4);

    let junk = dir.path().join("junk.pgm");
    fs::write(&junk, b"P3\n1 1\n255\n0 0 0\n").unwrap();
    let out = lsbstego(&["embed", "--cover", s(&junk), "--payload", s(&payload), "--out", s(&out_path)]);
    assert_eq!(out.code, 3);

    let out = lsbstego(&["embed", "--cover", s(&cover), "--payload", s(&payload), "--out", s(&out_path), "--plane", "b"]);
    assert_eq!(out.code, 1);

    let unwritable = dir.path().join("no/such/dir/o.pgm");
    let out = lsbstego(&["embed", "--cover", s(&cover), "--payload", s(&payload), "--out", s(&unwritable)]);
    assert_eq!(out.code, 4);

    let out = lsbstego(&["embed", "--cover", s(&cover)]);
    assert_eq!(out.code, 1);
}

#[test]
fn extract_error_codes() {
    let dir = TempDir::new().unwrap();
    let mut rng = StdRng::seed_from_u64(3);
    let pristine = write_rgb(dir.path(), "pristine.ppm", 40, 10, &mut rng);
    let out_path = dir.path().join("o.bin");

    let out = lsbstego(&["extract", "--stego", s(&pristine), "--out", s(&out_path)]);
    assert_eq!(out.code, 5);
    assert!(out.stderr.contains("not a stego image"));

    let payload = dir.path().join("p.bin");
    fs::write(&payload, b"hello").unwrap();
    let stego = dir.path().join("stego.ppm");
    let out = lsbstego(&["embed", "--cover", s(&pristine), "--payload", s(&payload), "--out", s(&stego), "--plane", "g"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.value("plane"), "green");

    for plane in ["r", "b"] {
        let out = lsbstego(&["extract", "--stego", s(&stego), "--out", s(&out_path), "--plane", plane]);
        assert_eq!(out.code, 5, "plane {plane}");
    }
    let out = lsbstego(&["extract", "--stego", s(&stego), "--out", s(&out_path), "--plane", "g"]);
    assert_eq!(out.code, 0);
    assert_eq!(fs::read(&out_path).unwrap(), b"hello");

    let truncated = dir.path().join("t.ppm");
    fs::write(&truncated, b"P6\n4 4\n255\n\x01\x02").unwrap();
    let out = lsbstego(&["extract", "--stego", s(&truncated), "--out", s(&out_path)]);
    assert_eq!(out.code, 3);
}

#[test]
fn capacity_reports() {
    let dir = TempDir::new().unwrap();
    let mut rng = StdRng::seed_from_u64(4);
    for (w, h, total, usable) in [(1024, 1, 256, 248), (4, 2, 2, 0), (512, 512, 65536, 65528)] {
        let cover = write_gray(dir.path(), "c.pgm", w, h, &mut rng);
        let out = lsbstego(&["capacity", "--cover", s(&cover)]);
        assert_eq!(out.code, 0);
        assert_eq!(out.value("capacity_total"), total.to_string());
        assert_eq!(out.value("capacity_usable"), usable.to_string());
    }
}

#[test]
fn psnr_reports() {
    let dir = TempDir::new().unwrap();
    let mut rng = StdRng::seed_from_u64(5);
    let a = write_rgb(dir.path(), "a.ppm", 8, 8, &mut rng);
    let out = lsbstego(&["psnr", "--ref", s(&a), "--test", s(&a)]);
    assert_eq!(out.code, 0);
    assert_eq!(out.value("psnr_db"), "inf");

    let b = write_rgb(dir.path(), "b.ppm", 8, 9, &mut rng);
    let out = lsbstego(&["psnr", "--ref", s(&a), "--test", s(&b)]);
    assert_eq!(out.code, 6);
    let g = write_gray(dir.path(), "g.pgm", 8, 8, &mut rng);
    let out = lsbstego(&["psnr", "--ref", s(&a), "--test", s(&g)]);
    assert_eq!(out.code, 6);
}

#[test]
fn random_round_trips_and_backend_independence() {
    let dir = TempDir::new().unwrap();
    let mut rng = StdRng::seed_from_u64(6);
    for case in 0..12 {
        let (w, h) = (rng.random_range(32..120), rng.random_range(1..40));
        let rgb = case % 2 == 0;
        let cover = if rgb {
            write_rgb(dir.path(), "c.ppm", w, h, &mut rng)
        } else {
            write_gray(dir.path(), "c.pgm", w, h, &mut rng)
        };
        let usable = h * (w / 4) - 8;
        let len = rng.random_range(0..=usable);
        let payload = dir.path().join("p.bin");
        fs::write(&payload, random_bytes(&mut rng, len)).unwrap();

        let mut outputs = Vec::new();
        for backend in [&["--backend", "seq"][..], &["--backend", "par"], &["--backend", "shuf", "--seed", "9"]] {
            let stego = dir.path().join("s.img");
            let mut args = vec!["embed", "--cover", s(&cover), "--payload", s(&payload), "--out", s(&stego)];
            args.extend_from_slice(backend);
            let out = lsbstego(&args);
            assert_eq!(out.code, 0, "{}", out.stderr);
            outputs.push(fs::read(&stego).unwrap());

            let recovered = dir.path().join("r.bin");
            let mut args = vec!["extract", "--stego", s(&stego), "--out", s(&recovered)];
            args.extend_from_slice(backend);
            assert_eq!(lsbstego(&args).code, 0);
            assert_eq!(fs::read(&recovered).unwrap(), fs::read(&payload).unwrap());
        }
        assert!(outputs.windows(2).all(|p| p[0] == p[1]), "case {case}");
        let magic = if rgb { &b"P6"[..] } else { b"P5" };
        assert!(outputs[0].starts_with(magic));
    }
}

#[test]
fn binary_honours_backend_env() {
    let dir = TempDir::new().unwrap();
    let mut rng = StdRng::seed_from_u64(7);
    let cover = write_gray(dir.path(), "c.pgm", 64, 8, &mut rng);
    let payload = dir.path().join("p.bin");
    fs::write(&payload, b"payload").unwrap();
    let stego = dir.path().join("s.pgm");

    let out = Command::new(env!("CARGO_BIN_EXE_lsbstego"))
        .args(["embed", "--cover", s(&cover), "--payload", s(&payload), "--out", s(&stego)])
        .env("LSBSTEGO_BACKEND", "seq")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("backend: sequential"));

    let out = Command::new(env!("CARGO_BIN_EXE_lsbstego"))
        .args(["extract", "--stego", s(&stego), "--out", s(&dir.path().join("r.bin"))])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let out = Command::new(env!("CARGO_BIN_EXE_lsbstego"))
        .args(["extract", "--stego", s(&cover), "--out", s(&dir.path().join("r.bin"))])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5));

    let _: Image = lsbstego_core::decode(&fs::read(&stego).unwrap()).unwrap();
}
