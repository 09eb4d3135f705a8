use super::{render_factors, Alphabet, Factor, Render, Word};
use crate::poly::OPoly;

/// The factors to the left and right of the hole at one nesting level.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frame {
    pub left: Vec<Factor>,
    pub right: Vec<Factor>,
}

impl Frame {
    pub fn new(left: Vec<Factor>, right: Vec<Factor>) -> Self {
        Frame { left, right }
    }
}

/// A word with exactly one hole `@`.
///
/// Stored as the chain of frames from the outermost level down to the level
/// holding the hole; every frame but the last surrounds a bracket that
/// contains the next frame.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context {
    frames: Vec<Frame>,
}

impl Default for Context {
    fn default() -> Self {
        Context::hole()
    }
}

impl Context {
    /// The identity context `@`.
    pub fn hole() -> Self {
        Context {
            frames: vec![Frame::new(Vec::new(), Vec::new())],
        }
    }

    pub fn from_frames(frames: Vec<Frame>) -> Self {
        debug_assert!(!frames.is_empty());
        Context { frames }
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn is_hole(&self) -> bool {
        self.frames.len() == 1 && self.frames[0].left.is_empty() && self.frames[0].right.is_empty()
    }

    /// `a * @ * b` at the top level.
    pub fn sandwich(left: &Word, right: &Word) -> Self {
        Context::from_frames(vec![Frame::new(
            left.factors().to_vec(),
            right.factors().to_vec(),
        )])
    }

    /// `[self]`: the hole gains one more enclosing bracket.
    pub fn bracketed(&self) -> Self {
        let mut frames = Vec::with_capacity(self.frames.len() + 1);
        frames.push(Frame::new(Vec::new(), Vec::new()));
        frames.extend(self.frames.iter().cloned());
        Context { frames }
    }

    /// `q|_u`: replaces the hole by `u`.
    pub fn plug(&self, u: &Word) -> Word {
        let mut current = u.factors().to_vec();
        for (i, frame) in self.frames.iter().enumerate().rev() {
            let mut level =
                Vec::with_capacity(frame.left.len() + current.len() + frame.right.len());
            level.extend_from_slice(&frame.left);
            level.extend(current);
            level.extend_from_slice(&frame.right);
            current = if i == 0 {
                level
            } else {
                vec![Factor::Bracket(Word::from_factors(level))]
            };
        }
        Word::from_factors(current)
    }

    /// `q|_s` for a polynomial `s`, extended linearly.
    pub fn plug_poly(&self, s: &OPoly) -> OPoly {
        s.map_words(|w| self.plug(w))
    }

    /// The context `q|_{inner}`: `inner` is plugged into this context's hole.
    pub fn compose(&self, inner: &Context) -> Context {
        let mut frames = self.frames.clone();
        let last = frames.pop().expect("context has a frame");
        let mut inner_frames = inner.frames.iter();
        let first = inner_frames.next().expect("context has a frame");
        let mut left = last.left;
        left.extend_from_slice(&first.left);
        let mut right = first.right.clone();
        right.extend(last.right);
        frames.push(Frame::new(left, right));
        frames.extend(inner_frames.cloned());
        Context { frames }
    }
}

impl Render for Context {
    fn render(&self, alphabet: &Alphabet, out: &mut String) {
        render_frames(&self.frames, alphabet, out);
    }
}

fn render_frames(frames: &[Frame], alphabet: &Alphabet, out: &mut String) {
    let frame = &frames[0];
    if !frame.left.is_empty() {
        render_factors(&frame.left, alphabet, out);
        out.push('*');
    }
    if frames.len() == 1 {
        out.push('@');
    } else {
        out.push('[');
        render_frames(&frames[1..], alphabet, out);
        out.push(']');
    }
    if !frame.right.is_empty() {
        out.push('*');
        render_factors(&frame.right, alphabet, out);
    }
}
