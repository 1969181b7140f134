#include "memnet/imaging.hpp"

// Built-in block-capital set, constructed on a 30x30 box centered in the
// 36x36 canvas (3 px margin all around). Strokes are 4-6 px. Letterforms are
// chosen so that any two letters differ in per-column ink mass across many
// columns, not merely in the row position of one bar: stems vary between
// edge and inset placement, bar lengths and stroke widths vary per letter,
// and diagonal strokes give sloped column profiles.

namespace memnet {

namespace {

constexpr int kBox = 30;
constexpr int kOff = (kGlyphDim - kBox) / 2;

class Pen {
public:
    explicit Pen(Bitmap& bmp) : bmp_(bmp) {}

    // All coordinates are box-relative; clipping keeps strokes inside the box.
    void rect(int x0, int y0, int x1, int y1) {
        for (int y = std::max(0, y0); y <= std::min(kBox - 1, y1); ++y)
            for (int x = std::max(0, x0); x <= std::min(kBox - 1, x1); ++x)
                bmp_.set(kOff + x, kOff + y, 1);
    }
    void hbar(int y, int h, int x0, int x1) { rect(x0, y, x1, y + h - 1); }
    void vbar(int x, int w, int y0, int y1) { rect(x, y0, x + w - 1, y1); }

    // Stepped diagonal of width w from (x0,y0) to (x1,y1), stamped as square
    // blocks so the result looks like printed block art.
    void diag(int x0, int y0, int x1, int y1, int w) {
        int steps = std::max(std::abs(x1 - x0), std::abs(y1 - y0));
        for (int t = 0; t <= steps; t += std::max(1, w / 2)) {
            int x = x0 + (x1 - x0) * t / steps;
            int y = y0 + (y1 - y0) * t / steps;
            rect(x - w / 2, y - w / 2, x - w / 2 + w - 1, y - w / 2 + w - 1);
        }
        rect(x1 - w / 2, y1 - w / 2, x1 - w / 2 + w - 1, y1 - w / 2 + w - 1);
    }

private:
    Bitmap& bmp_;
};

}  // namespace

GlyphSet builtin_glyphs() {
    GlyphSet set;
    set.provenance = "builtin";
    for (auto& b : set.glyphs) b = Bitmap(kGlyphDim, kGlyphDim);

    {  // A: triangle sides, plateau top, low crossbar
        Pen p(set.glyphs[0]);
        p.diag(5, 29, 13, 2, 5);
        p.diag(24, 29, 16, 2, 5);
        p.rect(11, 0, 18, 4);
        p.hbar(18, 4, 6, 23);
    }
    {  // B: left stem, three bars, two right bowls of different widths
        Pen p(set.glyphs[1]);
        p.vbar(0, 5, 0, 29);
        p.hbar(0, 4, 0, 21);
        p.hbar(13, 4, 0, 20);
        p.hbar(26, 4, 0, 23);
        p.vbar(18, 5, 3, 13);
        p.vbar(21, 5, 16, 26);
    }
    {  // C: thick left stem, full-width top and bottom
        Pen p(set.glyphs[2]);
        p.vbar(0, 6, 0, 29);
        p.hbar(0, 5, 0, 27);
        p.hbar(25, 5, 0, 27);
    }
    {  // D: narrow body, right stem inset
        Pen p(set.glyphs[3]);
        p.vbar(0, 5, 0, 29);
        p.hbar(0, 4, 0, 18);
        p.hbar(26, 4, 0, 18);
        p.vbar(16, 5, 3, 26);
    }
    {  // E: left stem, three full/partial bars
        Pen p(set.glyphs[4]);
        p.vbar(0, 5, 0, 29);
        p.hbar(0, 5, 0, 29);
        p.hbar(13, 4, 0, 19);
        p.hbar(25, 5, 0, 29);
    }
    {  // F: top bar, thick short mid bar, no bottom
        Pen p(set.glyphs[5]);
        p.vbar(0, 5, 0, 29);
        p.hbar(0, 5, 0, 29);
        p.hbar(12, 6, 0, 14);
    }
    {  // G: C plus inner bar and lower-right stem
        Pen p(set.glyphs[6]);
        p.vbar(0, 6, 0, 29);
        p.hbar(0, 5, 0, 27);
        p.hbar(25, 5, 0, 27);
        p.hbar(15, 5, 13, 29);
        p.vbar(24, 6, 15, 29);
    }
    {  // H: edge stems, mid bar
        Pen p(set.glyphs[7]);
        p.vbar(0, 5, 0, 29);
        p.vbar(25, 5, 0, 29);
        p.hbar(13, 4, 0, 29);
    }
    {  // I: thick center stem, short bars
        Pen p(set.glyphs[8]);
        p.hbar(0, 4, 4, 25);
        p.hbar(26, 4, 4, 25);
        p.vbar(11, 8, 0, 29);
    }
    {  // J: top bar, right-of-center stem, bottom hook with left stub
        Pen p(set.glyphs[9]);
        p.hbar(0, 4, 8, 29);
        p.vbar(17, 5, 0, 25);
        p.hbar(25, 5, 2, 21);
        p.vbar(2, 4, 17, 29);
    }
    {  // K: left stem, wide-opening diagonals
        Pen p(set.glyphs[10]);
        p.vbar(0, 5, 0, 29);
        p.diag(24, 1, 8, 13, 5);
        p.diag(8, 16, 24, 28, 5);
        p.rect(5, 12, 11, 17);
    }
    {  // L: thin stem, short bottom bar
        Pen p(set.glyphs[11]);
        p.vbar(0, 5, 0, 29);
        p.hbar(25, 5, 0, 23);
    }
    {  // M: edge stems, top bar, upper-half center wedge
        Pen p(set.glyphs[12]);
        p.vbar(0, 5, 0, 29);
        p.vbar(25, 5, 0, 29);
        p.hbar(0, 4, 0, 29);
        p.diag(7, 3, 14, 15, 4);
        p.diag(22, 3, 15, 15, 4);
    }
    {  // N: edge stems, full diagonal
        Pen p(set.glyphs[13]);
        p.vbar(0, 5, 0, 29);
        p.vbar(25, 5, 0, 29);
        p.diag(6, 2, 23, 27, 5);
    }
    {  // O: full ring
        Pen p(set.glyphs[14]);
        p.vbar(0, 5, 0, 29);
        p.vbar(25, 5, 0, 29);
        p.hbar(0, 4, 0, 29);
        p.hbar(26, 4, 0, 29);
    }
    {  // P: upper bowl only
        Pen p(set.glyphs[15]);
        p.vbar(0, 5, 0, 29);
        p.hbar(0, 4, 0, 22);
        p.hbar(13, 4, 0, 22);
        p.vbar(19, 5, 3, 13);
    }
    {  // Q: ring plus fat tail through the corner
        Pen p(set.glyphs[16]);
        p.vbar(0, 5, 0, 29);
        p.vbar(25, 5, 0, 29);
        p.hbar(0, 4, 0, 29);
        p.hbar(26, 4, 0, 29);
        p.diag(14, 14, 28, 28, 6);
    }
    {  // R: P plus fat leg
        Pen p(set.glyphs[17]);
        p.vbar(0, 5, 0, 29);
        p.hbar(0, 4, 0, 22);
        p.hbar(13, 4, 0, 22);
        p.vbar(19, 5, 3, 13);
        p.diag(9, 18, 24, 28, 6);
    }
    {  // S: offset half-stems left-high and right-low
        Pen p(set.glyphs[18]);
        p.hbar(0, 5, 2, 29);
        p.hbar(13, 4, 2, 27);
        p.hbar(25, 5, 0, 27);
        p.vbar(2, 5, 4, 13);
        p.vbar(23, 5, 16, 25);
    }
    {  // T: full top bar, thin stem
        Pen p(set.glyphs[19]);
        p.hbar(0, 5, 0, 29);
        p.vbar(13, 4, 5, 29);
    }
    {  // U: inset stems, bottom bar
        Pen p(set.glyphs[20]);
        p.vbar(3, 4, 0, 25);
        p.vbar(23, 4, 0, 25);
        p.hbar(25, 5, 3, 26);
    }
    {  // V: converging diagonals
        Pen p(set.glyphs[21]);
        p.diag(2, 0, 12, 26, 5);
        p.diag(27, 0, 17, 26, 5);
        p.rect(11, 24, 18, 29);
    }
    {  // W: edge stems, bottom bar, lower-half center stem
        Pen p(set.glyphs[22]);
        p.vbar(0, 4, 0, 29);
        p.vbar(26, 4, 0, 29);
        p.hbar(26, 4, 0, 29);
        p.vbar(13, 4, 10, 29);
    }
    {  // X: crossing diagonals
        Pen p(set.glyphs[23]);
        p.diag(2, 1, 27, 28, 5);
        p.diag(27, 1, 2, 28, 5);
    }
    {  // Y: arms to mid, thick lower stem
        Pen p(set.glyphs[24]);
        p.diag(2, 1, 13, 13, 5);
        p.diag(27, 1, 16, 13, 5);
        p.vbar(12, 6, 12, 29);
    }
    {  // Z: top and bottom bars, back diagonal
        Pen p(set.glyphs[25]);
        p.hbar(0, 5, 0, 29);
        p.hbar(25, 5, 0, 29);
        p.diag(24, 6, 4, 24, 5);
    }
    return set;
}

}  // namespace memnet
