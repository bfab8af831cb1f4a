#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dynlay/graph.hpp"

namespace dynlay::models {

/// Axis-aligned closed rectangle.
struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    bool contains(const Position& p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
};

struct Aggregate {
    std::size_t count = 0;
    double mass = 0.0;
    /// Mass-weighted mean position; (0, 0) when mass is zero.
    Position centroid;
};

/// Sums over the tree's points q of mass m_q, seen from p:
///   force  = sum m_q (p - q) / |p - q|^2
///   log_sum = sum m_q ln |p - q|
///   inverse_square = sum m_q / |p - q|^2
struct FieldSample {
    double fx = 0.0;
    double fy = 0.0;
    double log_sum = 0.0;
    double inverse_square = 0.0;
};

/// Region quadtree over identified point masses. Leaves hold one point,
/// except at the depth cap where a leaf keeps every point that lands there.
/// Cell aggregates are recomputed from children along the touched path on
/// every change, so they never drift from a fresh summation.
class QuadTree {
public:
    static constexpr int kMaxDepth = 48;

    QuadTree() = default;
    explicit QuadTree(const Rect& bounds, double jitter = 0.0);

    /// Coincident points are treated as `jitter` apart.
    void set_jitter(double jitter) { jitter_ = jitter; }

    std::size_t size() const { return slot_of_.size(); }
    bool contains(const NodeId& id) const { return slot_of_.count(id) != 0; }
    std::optional<Position> position(const NodeId& id) const;

    /// Throws GraphError on duplicate ids or non-finite coordinates. The root
    /// grows to cover points outside the current bounds.
    void insert(const NodeId& id, const Position& p, double mass = 1.0);
    /// Returns false when the id is absent.
    bool remove(const NodeId& id);
    void move(const NodeId& id, const Position& p);
    void clear();

    Aggregate total() const;
    /// Mass and centroid of the points inside `region`.
    Aggregate query(const Rect& region) const;

    /// Barnes-Hut field at p. A cell is summarized by its aggregate only when
    /// p lies outside it and side / distance-to-centroid < theta, so theta = 0
    /// sums every point individually. `exclude` is skipped.
    FieldSample field(const Position& p, double theta, const NodeId* exclude = nullptr) const;

    std::optional<Rect> bounds() const;
    std::size_t cell_count() const { return live_cells_; }
    int depth() const;

private:
    struct Item {
        NodeId id;
        Position p;
        double mass = 0.0;
        int cell = -1;
    };

    struct Cell {
        double cx = 0.0;
        double cy = 0.0;
        double half = 0.0;
        int depth = 0;
        int parent = -1;
        int child[4] = {-1, -1, -1, -1};
        std::vector<int> items;
        std::size_t count = 0;
        double mass = 0.0;
        double mx = 0.0;
        double my = 0.0;

        bool leaf() const { return child[0] < 0 && child[1] < 0 && child[2] < 0 && child[3] < 0; }
        bool covers(const Position& p) const
        {
            return p.x >= cx - half && p.x <= cx + half && p.y >= cy - half && p.y <= cy + half;
        }
    };

    int new_cell(double cx, double cy, double half, int depth, int parent);
    void free_cell(int c);
    int quadrant(const Cell& c, const Position& p) const;
    void grow_to(const Position& p);
    void place(int item);
    void refresh(int c);
    void refresh_up(int c);
    void collapse(int c);
    void collect(int c, std::vector<int>& out) const;
    void shift_depths(int c, int by);
    void accumulate(int c, const Rect& region, Aggregate& acc, double& sx, double& sy) const;
    void sample(int c, const Position& p, double theta, const NodeId* exclude,
                FieldSample& out) const;
    void add_point(const Position& p, const Position& q, double m, FieldSample& out) const;

    std::vector<Cell> cells_;
    std::vector<int> free_cells_;
    std::vector<Item> items_;
    std::vector<int> free_items_;
    std::unordered_map<NodeId, int> slot_of_;
    int root_ = -1;
    std::size_t live_cells_ = 0;
    std::optional<Rect> initial_;
    double jitter_ = 0.0;
};

}  // namespace dynlay::models
