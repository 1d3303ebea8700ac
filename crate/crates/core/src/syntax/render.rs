use std::fmt::Write;

use super::ast::{CoreProgram, Record, SurfaceElement, SurfaceProgram, SurfaceRecord};

fn record(node: &Record, out: &mut String) {
    out.push('{');
    let mut first = true;
    let mut sep = |out: &mut String| {
        if !std::mem::take(&mut first) {
            out.push_str(", ");
        }
    };
    for r in &node.inherits {
        sep(out);
        let _ = write!(out, "{r}");
    }
    for (label, child) in &node.children {
        sep(out);
        let _ = write!(out, "{label} = ");
        match (child.children.is_empty(), child.inherits.len()) {
            (true, 1) => {
                let only = child.inherits.iter().next().expect("one reference");
                let _ = write!(out, "{only}");
            }
            _ => record(child, out),
        }
    }
    out.push('}');
}

/// Canonical one-line text: references first, then definitions in label
/// order, every reference in indexed form. A definition whose body is a
/// single reference uses the `l = ^n.path` shorthand.
pub fn render(program: &CoreProgram) -> String {
    let mut out = String::new();
    record(&program.root, &mut out);
    out
}

fn surface_record(node: &SurfaceRecord, out: &mut String) {
    out.push('{');
    for (i, element) in node.elements.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        match element {
            SurfaceElement::Reference(r) => {
                let _ = write!(out, "{r}");
            }
            SurfaceElement::Definition(label, body) => {
                let _ = write!(out, "{label} = ");
                surface_record(body, out);
            }
        }
    }
    out.push('}');
}

/// Source text preserving element order and reference forms.
pub fn render_surface(program: &SurfaceProgram) -> String {
    let mut out = String::new();
    surface_record(&program.root, &mut out);
    out
}
