#include "viscount/trapmap.h"

#include "viscount/errors.h"
#include "viscount/rng.h"

#include <algorithm>
#include <cassert>
#include <map>

namespace viscount {

TrapMap::TrapMap(std::vector<Input> subsegments, Box box, std::uint64_t seed)
    : box_(std::move(box)), subs_(std::move(subsegments)) {
    lefts_.reserve(subs_.size());
    rights_.reserve(subs_.size());
    for (const Input& in : subs_) {
        assert(in.seg.a != in.seg.b);
        if (lex_less(in.seg.a, in.seg.b)) {
            lefts_.push_back(in.seg.a);
            rights_.push_back(in.seg.b);
        } else {
            lefts_.push_back(in.seg.b);
            rights_.push_back(in.seg.a);
        }
    }

    int t0 = new_trap(kTopSentinel, kBottomSentinel, box_.lo, box_.hi);
    root_ = traps_[static_cast<std::size_t>(t0)].node;

    std::vector<std::size_t> order(subs_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);
    for (std::size_t i : order) insert(static_cast<int>(i));

    finalize_live();
}

int TrapMap::new_trap(int top, int bottom, Point leftp, Point rightp) {
    Trap t;
    t.top = top;
    t.bottom = bottom;
    t.leftp = std::move(leftp);
    t.rightp = std::move(rightp);
    int id = static_cast<int>(traps_.size());
    traps_.push_back(std::move(t));
    traps_.back().node = new_leaf(id);
    return id;
}

int TrapMap::new_leaf(int trap) {
    Node n;
    n.kind = Node::Leaf;
    n.trap = trap;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size() - 1);
}

int TrapMap::orient_vs(int seg, const Point& p) const {
    std::size_t e = static_cast<std::size_t>(seg);
    return orient_sign(lefts_[e], rights_[e], p);
}

bool TrapMap::above(int seg, const Point& p) const { return orient_vs(seg, p) > 0; }

Rat TrapMap::y_at(int seg, const Rat& x) const {
    if (seg == kTopSentinel) return box_.hi.y;
    if (seg == kBottomSentinel) return box_.lo.y;
    std::size_t e = static_cast<std::size_t>(seg);
    const Point& l = lefts_[e];
    const Point& r = rights_[e];
    assert(l.x != r.x); // vertical pieces never bound positive-width traps
    return l.y + (x - l.x) * (r.y - l.y) / (r.x - l.x);
}

int TrapMap::locate_for_insert(const Point& p, const Point& dir) const {
    int cur = root_;
    for (;;) {
        const Node& n = nodes_[static_cast<std::size_t>(cur)];
        switch (n.kind) {
            case Node::Leaf:
                return n.trap;
            case Node::X:
                cur = lex_less(p, n.pt) ? n.left : n.right; // equal point goes right
                break;
            case Node::Y: {
                int o = orient_vs(n.seg, p);
                if (o > 0) { cur = n.left; break; }
                if (o < 0) { cur = n.right; break; }
                // p is a shared endpoint of n.seg; decide by direction.
                std::size_t e = static_cast<std::size_t>(n.seg);
                Rat c = cross2(rights_[e].x - lefts_[e].x, rights_[e].y - lefts_[e].y,
                               dir.x, dir.y);
                assert(sign(c) != 0); // equal slopes would mean overlapping input
                cur = sign(c) > 0 ? n.left : n.right;
                break;
            }
        }
    }
}

void TrapMap::insert(int sid) {
    std::size_t e = static_cast<std::size_t>(sid);
    const Point P = lefts_[e];
    const Point Q = rights_[e];
    Point dir(Q.x - P.x, Q.y - P.y);

    // Trapezoids crossed by the new subsegment, left to right.
    std::vector<int> path;
    path.push_back(locate_for_insert(P, dir));
    while (lex_less(traps_[static_cast<std::size_t>(path.back())].rightp, Q)) {
        const Trap& t = traps_[static_cast<std::size_t>(path.back())];
        int o = orient_vs(sid, t.rightp);
        assert(o != 0); // a vertex inside the relative interior means unsplit input
        int next = o > 0 ? t.lr : t.ur;
        assert(next >= 0);
        path.push_back(next);
    }

    std::vector<Trap> old;
    old.reserve(path.size());
    for (int id : path) old.push_back(traps_[static_cast<std::size_t>(id)]);
    const Trap& t0 = old.front();
    const Trap& tk = old.back();

    bool has_L = !(t0.leftp == P);
    bool has_R = !(tk.rightp == Q);
    int L = has_L ? new_trap(t0.top, t0.bottom, t0.leftp, P) : -1;
    int R = has_R ? new_trap(tk.top, tk.bottom, Q, tk.rightp) : -1;

    // Upper and lower runs along s, merged across walls whose vertex lies on
    // the other side.
    std::vector<int> upper_of(path.size()), lower_of(path.size());
    int U = new_trap(t0.top, sid, P, Q);
    int D = new_trap(sid, t0.bottom, P, Q);
    upper_of[0] = U;
    lower_of[0] = D;
    int first_U = U, first_D = D;

    // Whether a point sits exactly on a bounding edge (then the wall portion
    // on that side of the point has zero length and there is no neighbor).
    auto on_edge = [&](int seg, const Point& p) {
        if (seg == kTopSentinel) return p.y == box_.hi.y;
        if (seg == kBottomSentinel) return p.y == box_.lo.y;
        return orient_vs(seg, p) == 0;
    };

    auto fix_right_ptrs = [&](int t, int from, int to) {
        if (t < 0) return;
        Trap& x = traps_[static_cast<std::size_t>(t)];
        if (x.ur == from) x.ur = to;
        if (x.lr == from) x.lr = to;
    };
    auto fix_left_ptrs = [&](int t, int from, int to) {
        if (t < 0) return;
        Trap& x = traps_[static_cast<std::size_t>(t)];
        if (x.ul == from) x.ul = to;
        if (x.ll == from) x.ll = to;
    };

    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const Trap& ti = old[i];
        const Trap& tn = old[i + 1];
        int o = orient_vs(sid, ti.rightp);
        if (o > 0) {
            // Wall vertex above s: the upper run closes, the lower continues
            // (the wall below s is cut away, so the bottoms agree).
            assert(ti.bottom == tn.bottom);
            traps_[static_cast<std::size_t>(U)].rightp = ti.rightp;
            int closed = U;
            U = new_trap(tn.top, sid, ti.rightp, Q);
            traps_[static_cast<std::size_t>(closed)].lr = U;
            traps_[static_cast<std::size_t>(closed)].ur =
                (ti.ur == path[i + 1]) ? U : ti.ur;
            traps_[static_cast<std::size_t>(U)].ll = closed;
            if (ti.ur != path[i + 1]) fix_left_ptrs(ti.ur, path[i], closed);
            // The next trapezoid may have a second left neighbor above the
            // wall vertex; it keeps facing the new upper trapezoid.
            int outer = tn.ul;
            if (outer == path[i]) {
                traps_[static_cast<std::size_t>(U)].ul = closed;
            } else {
                traps_[static_cast<std::size_t>(U)].ul = outer;
                if (outer >= 0) fix_right_ptrs(outer, path[i + 1], U);
            }
        } else {
            assert(ti.top == tn.top);
            traps_[static_cast<std::size_t>(D)].rightp = ti.rightp;
            int closed = D;
            D = new_trap(sid, tn.bottom, ti.rightp, Q);
            traps_[static_cast<std::size_t>(closed)].ur = D;
            traps_[static_cast<std::size_t>(closed)].lr =
                (ti.lr == path[i + 1]) ? D : ti.lr;
            traps_[static_cast<std::size_t>(D)].ul = closed;
            if (ti.lr != path[i + 1]) fix_left_ptrs(ti.lr, path[i], closed);
            // Mirror: a second left neighbor below the wall vertex.
            int outer = tn.ll;
            if (outer == path[i]) {
                traps_[static_cast<std::size_t>(D)].ll = closed;
            } else {
                traps_[static_cast<std::size_t>(D)].ll = outer;
                if (outer >= 0) fix_right_ptrs(outer, path[i + 1], D);
            }
        }
        upper_of[i + 1] = U;
        lower_of[i + 1] = D;
    }

    // Left end.
    bool p_on_top = on_edge(t0.top, P);
    bool p_on_bot = on_edge(t0.bottom, P);
    if (has_L) {
        Trap& l = traps_[static_cast<std::size_t>(L)];
        l.ul = t0.ul;
        l.ll = t0.ll;
        l.ur = p_on_top ? -1 : first_U;
        l.lr = p_on_bot ? -1 : first_D;
        int u_left = p_on_top ? -1 : L;
        int d_left = p_on_bot ? -1 : L;
        traps_[static_cast<std::size_t>(first_U)].ul = u_left;
        traps_[static_cast<std::size_t>(first_U)].ll = u_left;
        traps_[static_cast<std::size_t>(first_D)].ul = d_left;
        traps_[static_cast<std::size_t>(first_D)].ll = d_left;
        fix_right_ptrs(t0.ul, path.front(), L);
        if (t0.ll != t0.ul) fix_right_ptrs(t0.ll, path.front(), L);
    } else {
        // s starts at the existing wall vertex P: the upper wall portion
        // belongs to the upper run, the lower portion to the lower run.
        int u_left = p_on_top ? -1 : t0.ul;
        int d_left = p_on_bot ? -1 : t0.ll;
        traps_[static_cast<std::size_t>(first_U)].ul = u_left;
        traps_[static_cast<std::size_t>(first_U)].ll = u_left;
        traps_[static_cast<std::size_t>(first_D)].ul = d_left;
        traps_[static_cast<std::size_t>(first_D)].ll = d_left;
        if (t0.ul == t0.ll) {
            // One left neighbor spanning both wall portions: only pointers
            // that actually referenced the dying trapezoid move.
            if (t0.ul >= 0) {
                Trap& x = traps_[static_cast<std::size_t>(t0.ul)];
                if (x.ur == path.front()) x.ur = first_U;
                if (x.lr == path.front()) x.lr = first_D;
            }
        } else {
            fix_right_ptrs(t0.ul, path.front(), first_U);
            fix_right_ptrs(t0.ll, path.front(), first_D);
        }
    }

    // Right end.
    traps_[static_cast<std::size_t>(U)].rightp = Q;
    traps_[static_cast<std::size_t>(D)].rightp = Q;
    bool q_on_top = on_edge(tk.top, Q);
    bool q_on_bot = on_edge(tk.bottom, Q);
    if (has_R) {
        Trap& r = traps_[static_cast<std::size_t>(R)];
        r.ur = tk.ur;
        r.lr = tk.lr;
        r.ul = q_on_top ? -1 : U;
        r.ll = q_on_bot ? -1 : D;
        int u_right = q_on_top ? -1 : R;
        int d_right = q_on_bot ? -1 : R;
        traps_[static_cast<std::size_t>(U)].ur = u_right;
        traps_[static_cast<std::size_t>(U)].lr = u_right;
        traps_[static_cast<std::size_t>(D)].ur = d_right;
        traps_[static_cast<std::size_t>(D)].lr = d_right;
        fix_left_ptrs(tk.ur, path.back(), R);
        if (tk.lr != tk.ur) fix_left_ptrs(tk.lr, path.back(), R);
    } else {
        int u_right = q_on_top ? -1 : tk.ur;
        int d_right = q_on_bot ? -1 : tk.lr;
        traps_[static_cast<std::size_t>(U)].ur = u_right;
        traps_[static_cast<std::size_t>(U)].lr = u_right;
        traps_[static_cast<std::size_t>(D)].ur = d_right;
        traps_[static_cast<std::size_t>(D)].lr = d_right;
        if (tk.ur == tk.lr) {
            if (tk.ur >= 0) {
                Trap& x = traps_[static_cast<std::size_t>(tk.ur)];
                if (x.ul == path.back()) x.ul = U;
                if (x.ll == path.back()) x.ll = D;
            }
        } else {
            fix_left_ptrs(tk.ur, path.back(), U);
            fix_left_ptrs(tk.lr, path.back(), D);
        }
    }

    // Search structure: replace each old leaf in place so every parent link
    // stays valid.
    for (std::size_t i = 0; i < path.size(); ++i) {
        Node y;
        y.kind = Node::Y;
        y.seg = sid;
        y.left = traps_[static_cast<std::size_t>(upper_of[i])].node;
        y.right = traps_[static_cast<std::size_t>(lower_of[i])].node;
        nodes_.push_back(y);
        int subtree = static_cast<int>(nodes_.size() - 1);
        if (i + 1 == path.size() && has_R) {
            Node x;
            x.kind = Node::X;
            x.pt = Q;
            x.left = subtree;
            x.right = traps_[static_cast<std::size_t>(R)].node;
            nodes_.push_back(x);
            subtree = static_cast<int>(nodes_.size() - 1);
        }
        if (i == 0 && has_L) {
            Node x;
            x.kind = Node::X;
            x.pt = P;
            x.left = traps_[static_cast<std::size_t>(L)].node;
            x.right = subtree;
            nodes_.push_back(x);
            subtree = static_cast<int>(nodes_.size() - 1);
        }
        int slot = old[i].node;
        nodes_[static_cast<std::size_t>(slot)] = nodes_[static_cast<std::size_t>(subtree)];
    }

    for (int id : path) traps_[static_cast<std::size_t>(id)].removed = true;
}

void TrapMap::finalize_live() {
    live_.clear();
    for (std::size_t i = 0; i < traps_.size(); ++i)
        if (!traps_[i].removed) live_.push_back(static_cast<int>(i));
}

Point TrapMap::corner(int trap, bool right_side, bool top_side) const {
    const Trap& t = traps_[static_cast<std::size_t>(trap)];
    const Point& v = right_side ? t.rightp : t.leftp;
    int e = top_side ? t.top : t.bottom;
    if (e == kTopSentinel) return Point(v.x, box_.hi.y);
    if (e == kBottomSentinel) return Point(v.x, box_.lo.y);
    std::size_t se = static_cast<std::size_t>(e);
    if (lefts_[se].x == rights_[se].x) return v; // the shear wall meets a
                                                 // vertical piece at its vertex
    return Point(v.x, y_at(e, v.x));
}

Point TrapMap::representative(int trap) const {
    const Trap& t = traps_[static_cast<std::size_t>(trap)];
    assert(!is_sliver(trap));
    // Any strictly interior point serves; a coarse dyadic one keeps every
    // later predicate on it cheap.
    Rat xm = simplest_dyadic_between(t.leftp.x, t.rightp.x);
    Rat yb = y_at(t.bottom, xm);
    Rat yt = y_at(t.top, xm);
    if (!(yb < yt)) {
        // Pinched near the chosen x (corner trapezoids): fall back to the
        // exact midline construction.
        xm = (t.leftp.x + t.rightp.x) / 2;
        yb = y_at(t.bottom, xm);
        yt = y_at(t.top, xm);
        assert(yb < yt);
        return Point(std::move(xm), (yb + yt) / 2);
    }
    return Point(std::move(xm), simplest_dyadic_between(yb, yt));
}

Rat TrapMap::area(int trap) const {
    const Trap& t = traps_[static_cast<std::size_t>(trap)];
    Rat w = t.rightp.x - t.leftp.x;
    if (sign(w) == 0) return Rat(0);
    Rat hl = y_at(t.top, t.leftp.x) - y_at(t.bottom, t.leftp.x);
    Rat hr = y_at(t.top, t.rightp.x) - y_at(t.bottom, t.rightp.x);
    return w * (hl + hr) / 2;
}

int TrapMap::locate(const Point& p) const {
    int cur = root_;
    for (;;) {
        const Node& n = nodes_[static_cast<std::size_t>(cur)];
        switch (n.kind) {
            case Node::Leaf: {
                if (is_sliver(n.trap))
                    throw OnBoundary("point lies on a vertical decomposition wall");
                return n.trap;
            }
            case Node::X:
                if (p == n.pt) throw OnBoundary("point coincides with a vertex");
                cur = lex_less(p, n.pt) ? n.left : n.right;
                break;
            case Node::Y: {
                int o = orient_vs(n.seg, p);
                if (o == 0) throw OnBoundary("point lies on a decomposition edge");
                cur = o > 0 ? n.left : n.right;
                break;
            }
        }
    }
}

std::vector<int> TrapMap::locate_segment(const Segment& s) const {
    const Point& mn = lex_less(s.a, s.b) ? s.a : s.b;
    const Point& mx = lex_less(s.a, s.b) ? s.b : s.a;

    std::vector<int> out;
    if (visit_stamp_.size() < nodes_.size()) visit_stamp_.resize(nodes_.size(), 0);
    std::uint32_t stamp = ++stamp_;
    std::vector<int> stack = {root_};
    while (!stack.empty()) {
        int cur = stack.back();
        stack.pop_back();
        if (visit_stamp_[static_cast<std::size_t>(cur)] == stamp) continue;
        visit_stamp_[static_cast<std::size_t>(cur)] = stamp;
        const Node& n = nodes_[static_cast<std::size_t>(cur)];
        switch (n.kind) {
            case Node::Leaf:
                out.push_back(n.trap);
                break;
            case Node::X:
                if (!lex_less(n.pt, mn)) stack.push_back(n.left);
                if (!lex_less(mx, n.pt)) stack.push_back(n.right);
                break;
            case Node::Y: {
                int o1 = orient_vs(n.seg, s.a);
                int o2 = orient_vs(n.seg, s.b);
                if (o1 >= 0 || o2 >= 0) stack.push_back(n.left);
                if (o1 <= 0 || o2 <= 0) stack.push_back(n.right);
                break;
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int TrapMap::locate_by_scan(const Point& p) const {
    for (int id : live_) {
        const Trap& t = traps_[static_cast<std::size_t>(id)];
        if (!(lex_less(t.leftp, p) && lex_less(p, t.rightp))) continue;
        if (is_sliver(id)) continue;
        if (t.top != kTopSentinel) {
            if (orient_vs(t.top, p) >= 0) continue;
        } else if (p.y >= box_.hi.y) {
            continue;
        }
        if (t.bottom != kBottomSentinel) {
            if (orient_vs(t.bottom, p) <= 0) continue;
        } else if (p.y <= box_.lo.y) {
            continue;
        }
        return id;
    }
    return -1;
}

std::vector<TrapMap::Adjacency> TrapMap::adjacencies() const {
    std::vector<Adjacency> out;

    // Wall adjacencies, grouped by the generating vertex.
    std::map<Point, std::pair<std::vector<int>, std::vector<int>>, PointLexLess> walls;
    for (int id : live_) {
        const Trap& t = traps_[static_cast<std::size_t>(id)];
        walls[t.rightp].first.push_back(id);
        walls[t.leftp].second.push_back(id);
    }
    for (const auto& [v, sides] : walls) {
        for (int a : sides.first) {
            Rat alo = corner(a, true, false).y;
            Rat ahi = corner(a, true, true).y;
            if (!(alo < ahi)) continue;
            for (int b : sides.second) {
                Rat blo = corner(b, false, false).y;
                Rat bhi = corner(b, false, true).y;
                if (!(blo < bhi)) continue;
                Rat lo = std::max(alo, blo);
                Rat hi = std::min(ahi, bhi);
                if (lo < hi) {
                    Adjacency adj;
                    adj.kind = Adjacency::Wall;
                    adj.a = a;
                    adj.b = b;
                    adj.shared_midpoint = Point(v.x, (lo + hi) / 2);
                    out.push_back(std::move(adj));
                }
            }
        }
    }

    // Across-segment adjacencies, grouped per subsegment.
    struct Span {
        int trap;
        Rat lo, hi;
    };
    std::vector<std::vector<Span>> above(subs_.size()), below(subs_.size());
    for (int id : live_) {
        const Trap& t = traps_[static_cast<std::size_t>(id)];
        for (int side = 0; side < 2; ++side) {
            int e = side == 0 ? t.bottom : t.top;
            if (e < 0) continue;
            std::size_t se = static_cast<std::size_t>(e);
            bool vertical = lefts_[se].x == rights_[se].x;
            Point cl = corner(id, false, side == 0 ? false : true);
            Point cr = corner(id, true, side == 0 ? false : true);
            Rat lo = vertical ? cl.y : cl.x;
            Rat hi = vertical ? cr.y : cr.x;
            if (!(lo < hi)) continue;
            if (side == 0)
                above[se].push_back({id, std::move(lo), std::move(hi)});
            else
                below[se].push_back({id, std::move(lo), std::move(hi)});
        }
    }
    for (std::size_t e = 0; e < subs_.size(); ++e) {
        if (above[e].empty() || below[e].empty()) continue;
        bool vertical = lefts_[e].x == rights_[e].x;
        for (const Span& a : above[e]) {
            for (const Span& b : below[e]) {
                Rat lo = std::max(a.lo, b.lo);
                Rat hi = std::min(a.hi, b.hi);
                if (!(lo < hi)) continue;
                Adjacency adj;
                adj.kind = Adjacency::AcrossSegment;
                adj.a = a.trap;
                adj.b = b.trap;
                adj.subsegment = static_cast<int>(e);
                Rat mid = (lo + hi) / 2;
                adj.shared_midpoint =
                    vertical ? Point(lefts_[e].x, mid) : Point(mid, y_at(static_cast<int>(e), mid));
                out.push_back(std::move(adj));
            }
        }
    }
    return out;
}

void TrapMap::validate_structure() const {
    // Exact area partition.
    Rat total(0);
    for (int id : live_) total += area(id);
    if (total != box_.area()) throw Error("trapezoid areas do not tile the box");

    // Both sides of every non-vertical subsegment are exactly tiled.
    for (std::size_t e = 0; e < subs_.size(); ++e) {
        if (lefts_[e].x == rights_[e].x) continue;
        for (int side = 0; side < 2; ++side) {
            Rat covered(0);
            Rat mn = rights_[e].x, mx = lefts_[e].x;
            bool any = false;
            for (int id : live_) {
                const Trap& t = traps_[static_cast<std::size_t>(id)];
                int ref = side == 0 ? t.top : t.bottom;
                if (ref != static_cast<int>(e)) continue;
                any = true;
                covered += t.rightp.x - t.leftp.x;
                mn = std::min(mn, t.leftp.x);
                mx = std::max(mx, t.rightp.x);
            }
            if (!any || covered != rights_[e].x - lefts_[e].x || mn != lefts_[e].x ||
                mx != rights_[e].x)
                throw Error("subsegment side is not exactly tiled");
        }
    }
}

} // namespace viscount
