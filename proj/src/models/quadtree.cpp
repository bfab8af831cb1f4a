#include "dynlay/models/quadtree.hpp"

#include <algorithm>
#include <cmath>

#include "dynlay/models/common.hpp"

namespace dynlay::models {

QuadTree::QuadTree(const Rect& bounds, double jitter) : initial_(bounds), jitter_(jitter) {}

std::optional<Position> QuadTree::position(const NodeId& id) const
{
    auto it = slot_of_.find(id);
    if (it == slot_of_.end())
        return std::nullopt;
    return items_[it->second].p;
}

int QuadTree::new_cell(double cx, double cy, double half, int depth, int parent)
{
    int c;
    if (!free_cells_.empty()) {
        c = free_cells_.back();
        free_cells_.pop_back();
        cells_[c] = Cell{};
    } else {
        c = static_cast<int>(cells_.size());
        cells_.emplace_back();
    }
    Cell& cell = cells_[c];
    cell.cx = cx;
    cell.cy = cy;
    cell.half = half;
    cell.depth = depth;
    cell.parent = parent;
    ++live_cells_;
    return c;
}

void QuadTree::free_cell(int c)
{
    for (int q = 0; q < 4; ++q) {
        if (cells_[c].child[q] >= 0)
            free_cell(cells_[c].child[q]);
    }
    cells_[c] = Cell{};
    free_cells_.push_back(c);
    --live_cells_;
}

// Bit 0: right half, bit 1: upper half. Points on a midline go right/up.
int QuadTree::quadrant(const Cell& c, const Position& p) const
{
    return (p.x >= c.cx ? 1 : 0) | (p.y >= c.cy ? 2 : 0);
}

void QuadTree::shift_depths(int c, int by)
{
    cells_[c].depth += by;
    for (int q = 0; q < 4; ++q) {
        if (cells_[c].child[q] >= 0)
            shift_depths(cells_[c].child[q], by);
    }
}

void QuadTree::grow_to(const Position& p)
{
    if (root_ < 0) {
        if (initial_) {
            const double w = initial_->x1 - initial_->x0;
            const double h = initial_->y1 - initial_->y0;
            const double half = std::max({w, h, 1e-300}) / 2.0;
            root_ = new_cell((initial_->x0 + initial_->x1) / 2.0,
                             (initial_->y0 + initial_->y1) / 2.0, half, 0, -1);
        } else {
            root_ = new_cell(p.x, p.y, 1.0, 0, -1);
        }
    }
    while (!cells_[root_].covers(p)) {
        const Cell old = cells_[root_];
        const double cx = old.cx + (p.x >= old.cx ? old.half : -old.half);
        const double cy = old.cy + (p.y >= old.cy ? old.half : -old.half);
        const int top = new_cell(cx, cy, 2.0 * old.half, 0, -1);
        shift_depths(root_, 1);
        cells_[root_].parent = top;
        cells_[top].child[quadrant(cells_[top], Position{old.cx, old.cy})] = root_;
        root_ = top;
        refresh(root_);
    }
}

void QuadTree::insert(const NodeId& id, const Position& p, double mass)
{
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw GraphError("non-finite position for '" + id + "'");
    if (slot_of_.count(id))
        throw GraphError("duplicate tree entry '" + id + "'");
    grow_to(p);
    int slot;
    if (!free_items_.empty()) {
        slot = free_items_.back();
        free_items_.pop_back();
    } else {
        slot = static_cast<int>(items_.size());
        items_.emplace_back();
    }
    items_[slot] = Item{id, p, mass, -1};
    slot_of_[id] = slot;
    place(slot);
    refresh_up(items_[slot].cell);
}

void QuadTree::place(int item)
{
    const Position p = items_[item].p;
    int c = root_;
    for (;;) {
        if (cells_[c].leaf()) {
            if (cells_[c].items.empty() || cells_[c].depth >= kMaxDepth) {
                cells_[c].items.push_back(item);
                items_[item].cell = c;
                return;
            }
            // Split: push the resident points one level down.
            std::vector<int> resident = std::move(cells_[c].items);
            cells_[c].items.clear();
            for (int r : resident) {
                const int q = quadrant(cells_[c], items_[r].p);
                if (cells_[c].child[q] < 0) {
                    const double h = cells_[c].half / 2.0;
                    const int child = new_cell(cells_[c].cx + ((q & 1) ? h : -h),
                                               cells_[c].cy + ((q & 2) ? h : -h), h,
                                               cells_[c].depth + 1, c);
                    cells_[c].child[q] = child;
                }
                const int child = cells_[c].child[q];
                cells_[child].items.push_back(r);
                items_[r].cell = child;
                refresh(child);
            }
        }
        const int q = quadrant(cells_[c], p);
        if (cells_[c].child[q] < 0) {
            const double h = cells_[c].half / 2.0;
            const int child = new_cell(cells_[c].cx + ((q & 1) ? h : -h),
                                       cells_[c].cy + ((q & 2) ? h : -h), h, cells_[c].depth + 1, c);
            cells_[c].child[q] = child;
        }
        c = cells_[c].child[q];
    }
}

void QuadTree::refresh(int c)
{
    Cell& cell = cells_[c];
    cell.count = 0;
    cell.mass = 0.0;
    cell.mx = 0.0;
    cell.my = 0.0;
    if (cell.leaf()) {
        for (int i : cell.items) {
            const Item& it = items_[i];
            ++cell.count;
            cell.mass += it.mass;
            cell.mx += it.mass * it.p.x;
            cell.my += it.mass * it.p.y;
        }
        return;
    }
    for (int q = 0; q < 4; ++q) {
        const int ch = cell.child[q];
        if (ch < 0)
            continue;
        cell.count += cells_[ch].count;
        cell.mass += cells_[ch].mass;
        cell.mx += cells_[ch].mx;
        cell.my += cells_[ch].my;
    }
}

void QuadTree::refresh_up(int c)
{
    while (c >= 0) {
        refresh(c);
        c = cells_[c].parent;
    }
}

void QuadTree::collect(int c, std::vector<int>& out) const
{
    const Cell& cell = cells_[c];
    out.insert(out.end(), cell.items.begin(), cell.items.end());
    for (int q = 0; q < 4; ++q) {
        if (cell.child[q] >= 0)
            collect(cell.child[q], out);
    }
}

void QuadTree::collapse(int c)
{
    std::vector<int> held;
    collect(c, held);
    for (int q = 0; q < 4; ++q) {
        if (cells_[c].child[q] >= 0) {
            free_cell(cells_[c].child[q]);
            cells_[c].child[q] = -1;
        }
    }
    cells_[c].items = held;
    for (int i : held)
        items_[i].cell = c;
    refresh(c);
}

bool QuadTree::remove(const NodeId& id)
{
    auto it = slot_of_.find(id);
    if (it == slot_of_.end())
        return false;
    const int slot = it->second;
    int c = items_[slot].cell;
    auto& held = cells_[c].items;
    held.erase(std::find(held.begin(), held.end(), slot));
    slot_of_.erase(it);
    items_[slot] = Item{};
    free_items_.push_back(slot);

    while (c >= 0) {
        refresh(c);
        const int parent = cells_[c].parent;
        if (c != root_ && cells_[c].count == 0) {
            for (int q = 0; q < 4; ++q) {
                if (cells_[parent].child[q] == c)
                    cells_[parent].child[q] = -1;
            }
            free_cell(c);
        } else if (!cells_[c].leaf() && cells_[c].count <= 1) {
            collapse(c);
        }
        c = parent;
    }
    return true;
}

void QuadTree::move(const NodeId& id, const Position& p)
{
    auto it = slot_of_.find(id);
    if (it == slot_of_.end())
        throw GraphError("unknown tree entry '" + id + "'");
    const double mass = items_[it->second].mass;
    remove(id);
    insert(id, p, mass);
}

void QuadTree::clear()
{
    cells_.clear();
    free_cells_.clear();
    items_.clear();
    free_items_.clear();
    slot_of_.clear();
    root_ = -1;
    live_cells_ = 0;
}

Aggregate QuadTree::total() const
{
    Aggregate a;
    if (root_ < 0)
        return a;
    const Cell& r = cells_[root_];
    a.count = r.count;
    a.mass = r.mass;
    if (r.mass != 0.0)
        a.centroid = {r.mx / r.mass, r.my / r.mass};
    return a;
}

void QuadTree::accumulate(int c, const Rect& region, Aggregate& acc, double& sx, double& sy) const
{
    const Cell& cell = cells_[c];
    if (cell.count == 0)
        return;
    const Rect box{cell.cx - cell.half, cell.cy - cell.half, cell.cx + cell.half,
                   cell.cy + cell.half};
    if (box.x1 < region.x0 || box.x0 > region.x1 || box.y1 < region.y0 || box.y0 > region.y1)
        return;
    if (box.x0 >= region.x0 && box.x1 <= region.x1 && box.y0 >= region.y0 && box.y1 <= region.y1) {
        acc.count += cell.count;
        acc.mass += cell.mass;
        sx += cell.mx;
        sy += cell.my;
        return;
    }
    for (int i : cell.items) {
        const Item& it = items_[i];
        if (region.contains(it.p)) {
            ++acc.count;
            acc.mass += it.mass;
            sx += it.mass * it.p.x;
            sy += it.mass * it.p.y;
        }
    }
    for (int q = 0; q < 4; ++q) {
        if (cell.child[q] >= 0)
            accumulate(cell.child[q], region, acc, sx, sy);
    }
}

Aggregate QuadTree::query(const Rect& region) const
{
    Aggregate acc;
    if (root_ < 0)
        return acc;
    double sx = 0.0;
    double sy = 0.0;
    accumulate(root_, region, acc, sx, sy);
    if (acc.mass != 0.0)
        acc.centroid = {sx / acc.mass, sy / acc.mass};
    return acc;
}

void QuadTree::add_point(const Position& p, const Position& q, double m, FieldSample& out) const
{
    double dx = p.x - q.x;
    double dy = p.y - q.y;
    double d2 = dx * dx + dy * dy;
    if (d2 == 0.0) {
        if (jitter_ <= 0.0)
            return;
        const Separation s = separation(p, q, jitter_, 0, 1);
        dx = s.dx;
        dy = s.dy;
        d2 = s.dist * s.dist;
    }
    out.fx += m * dx / d2;
    out.fy += m * dy / d2;
    out.log_sum += 0.5 * m * std::log(d2);
    out.inverse_square += m / d2;
}

void QuadTree::sample(int c, const Position& p, double theta, const NodeId* exclude,
                      FieldSample& out) const
{
    const Cell& cell = cells_[c];
    if (cell.count == 0)
        return;
    if (!cell.leaf() && !cell.covers(p)) {
        const Position centroid{cell.mx / cell.mass, cell.my / cell.mass};
        const double dist = std::hypot(p.x - centroid.x, p.y - centroid.y);
        if (dist > 0.0 && 2.0 * cell.half / dist < theta) {
            add_point(p, centroid, cell.mass, out);
            return;
        }
    }
    for (int i : cell.items) {
        const Item& it = items_[i];
        if (exclude && it.id == *exclude)
            continue;
        add_point(p, it.p, it.mass, out);
    }
    for (int q = 0; q < 4; ++q) {
        if (cell.child[q] >= 0)
            sample(cell.child[q], p, theta, exclude, out);
    }
}

FieldSample QuadTree::field(const Position& p, double theta, const NodeId* exclude) const
{
    FieldSample out;
    if (root_ >= 0)
        sample(root_, p, theta, exclude, out);
    return out;
}

std::optional<Rect> QuadTree::bounds() const
{
    if (root_ < 0)
        return std::nullopt;
    const Cell& r = cells_[root_];
    return Rect{r.cx - r.half, r.cy - r.half, r.cx + r.half, r.cy + r.half};
}

int QuadTree::depth() const
{
    int best = 0;
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        if (cells_[c].half > 0.0 && root_ >= 0)
            best = std::max(best, cells_[c].depth);
    }
    return best;
}

}  // namespace dynlay::models
