use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use sxl_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = sxl_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn family(spec: &str) -> *mut SxlGraph {
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { sxl_graph_from_family(c(spec).as_ptr(), &mut g) },
        SxlStatus::Ok
    );
    g
}

#[test]
fn edges_round_trip_through_graph6() {
    let edges = [0usize, 1, 1, 2, 2, 3, 3, 4, 4, 0];
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(
            sxl_graph_from_edges(5, edges.as_ptr(), 5, &mut g),
            SxlStatus::Ok
        );
        assert_eq!(sxl_graph_vertex_count(g), 5);
        assert_eq!(sxl_graph_edge_count(g), 5);
        let mut s = ptr::null_mut();
        assert_eq!(sxl_graph_to_graph6(g, &mut s), SxlStatus::Ok);
        assert_eq!(CStr::from_ptr(s).to_str().unwrap(), "Dhc");
        let mut h = ptr::null_mut();
        assert_eq!(sxl_graph_from_graph6(s, &mut h), SxlStatus::Ok);
        assert_eq!(sxl_graph_edge_count(h), 5);
        sxl_string_free(s);
        sxl_graph_free(h);
        sxl_graph_free(g);
    }
}

#[test]
fn spectral_radius_and_perron() {
    let g = family("K2,3");
    unsafe {
        let mut l = 0.0;
        assert_eq!(sxl_spectral_radius(g, &mut l), SxlStatus::Ok);
        assert!((l - 6f64.sqrt()).abs() < 1e-10);
        let mut buf = [0.0; 5];
        assert_eq!(
            sxl_perron_vector(g, buf.as_mut_ptr(), 4),
            SxlStatus::BufferTooSmall
        );
        assert_eq!(sxl_perron_vector(g, buf.as_mut_ptr(), 5), SxlStatus::Ok);
        assert!(buf.iter().all(|&x| x > 0.0 && x <= 1.0));
        assert!(buf.contains(&1.0));
        sxl_graph_free(g);
    }
}

#[test]
fn containment_and_canonical_form() {
    let w = family("W6");
    unsafe {
        let mut yes = false;
        assert_eq!(sxl_contains(w, c("C5").as_ptr(), &mut yes), SxlStatus::Ok);
        assert!(yes);
        assert_eq!(sxl_contains(w, c("K4").as_ptr(), &mut yes), SxlStatus::Ok);
        assert!(!yes);

        let a = family("P4");
        let edges = [1usize, 3, 3, 0, 0, 2];
        let mut b = ptr::null_mut();
        sxl_graph_from_edges(4, edges.as_ptr(), 3, &mut b);
        let (mut sa, mut sb) = (ptr::null_mut(), ptr::null_mut());
        sxl_graph_canonical_graph6(a, &mut sa);
        sxl_graph_canonical_graph6(b, &mut sb);
        assert_eq!(CStr::from_ptr(sa), CStr::from_ptr(sb));
        sxl_string_free(sa);
        sxl_string_free(sb);
        for g in [w, a, b] {
            sxl_graph_free(g);
        }
    }
}

#[test]
fn bounds_and_counts() {
    unsafe {
        let mut v = 0.0;
        assert_eq!(
            sxl_bound_value(c("nosal").as_ptr(), 9, &mut v),
            SxlStatus::Ok
        );
        assert_eq!(v, 3.0);
        assert_eq!(
            sxl_bound_value(c("f3").as_ptr(), 1, &mut v),
            SxlStatus::InvalidParameter
        );
        let mut n = 0;
        assert_eq!(sxl_count_graphs(4, true, &mut n), SxlStatus::Ok);
        assert_eq!(n, 5);
        assert_eq!(
            sxl_count_graphs(0, true, &mut n),
            SxlStatus::InvalidParameter
        );
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(
            sxl_graph_from_graph6(c("A").as_ptr(), &mut g),
            SxlStatus::MalformedGraph6
        );
        assert!(last_error().contains("graph6"));
        let edges = [0usize, 0];
        assert_eq!(
            sxl_graph_from_edges(2, edges.as_ptr(), 1, &mut g),
            SxlStatus::InvalidEdge
        );
        assert_eq!(
            sxl_graph_from_edges(200, ptr::null(), 0, &mut g),
            SxlStatus::VertexLimitExceeded
        );
        assert_eq!(
            sxl_graph_from_family(c("nope").as_ptr(), &mut g),
            SxlStatus::Parse
        );
        assert_eq!(
            sxl_graph_from_family(ptr::null(), &mut g),
            SxlStatus::NullPointer
        );
        assert_eq!(
            sxl_graph_from_family(c("K3").as_ptr(), ptr::null_mut()),
            SxlStatus::NullPointer
        );
        let bad = [0xffu8, 0];
        assert_eq!(
            sxl_graph_from_family(bad.as_ptr().cast(), &mut g),
            SxlStatus::InvalidUtf8
        );
        assert!(g.is_null());
        assert_eq!(sxl_graph_vertex_count(ptr::null()), 0);
        sxl_graph_free(ptr::null_mut());
        sxl_string_free(ptr::null_mut());
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/sxl.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in [
        "sxl_graph_from_edges",
        "sxl_graph_from_graph6",
        "sxl_graph_from_family",
        "sxl_graph_free",
        "sxl_spectral_radius",
        "sxl_perron_vector",
        "sxl_contains",
        "sxl_graph_to_graph6",
        "sxl_string_free",
        "sxl_bound_value",
        "sxl_last_error_message",
    ] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let src = std::env::temp_dir().join(format!("sxl_header_{}.c", std::process::id()));
    std::fs::write(
        &src,
        "#include \"sxl.h\"\nint main(void) { SxlGraph *g = 0; return (int)sxl_graph_vertex_count(g); }\n",
    )
    .unwrap();
    match Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header.parent().unwrap())
        .arg(&src)
        .status()
    {
        Ok(status) => assert!(status.success(), "{cc} rejected sxl.h"),
        Err(_) => eprintln!("no C compiler found; skipping syntax check"),
    }
    let _ = std::fs::remove_file(src);
}
