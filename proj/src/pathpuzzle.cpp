#include <pathred/pathpuzzle.h>

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>

namespace pathred
{
namespace
{
    constexpr std::int64_t kMaxLiftedPath = 50'000'000;
    constexpr std::int64_t kUnbounded = std::int64_t{1} << 60;

    void add(Violations& out, std::string locus, std::string message)
    {
        out.push_back(Violation{std::move(locus), std::move(message)});
    }

    std::string cell_text(const Cell& c) { return "(" + std::to_string(c.row) + ", " + std::to_string(c.col) + ")"; }

    Cell door_cell(const Door& d) { return Cell{to_int64(d.row), to_int64(d.col)}; }

    /// Compares visit counts against one label sequence.
    void check_line_counts(Violations& out, const RunSequence<Label>& labels, const std::map<std::int64_t, std::int64_t>& hits,
                           const char* field)
    {
        for (const auto& [line, count] : hits)
        {
            const Label& label = labels.at(Integer(line - 1));
            if (label && *label != count)
                add(out, std::string(field) + "[" + std::to_string(line) + "]",
                    "label " + label->str() + " but the path visits " + std::to_string(count) + " cells");
        }
        // Lines with a positive label that the path never enters.
        for (std::size_t r = 0; r < labels.runs().size(); ++r)
        {
            const auto& run = labels.runs()[r];
            const auto block = run.block();
            const Integer start = labels.run_start(r);  // 0-based
            const Integer period = block.size();
            for (std::size_t k = 0; k < block.size(); ++k)
            {
                if (!block[k] || *block[k] == 0 || run.length <= k)
                    continue;
                const Integer lines = (run.length - k + period - 1) / period;
                Integer visited = 0;
                for (auto it = hits.lower_bound(to_int64(start + 1)); it != hits.end() && it->first <= start + run.length;
                     ++it)
                    if ((it->first - 1 - start) % period == k)
                        ++visited;
                if (visited < lines)
                    add(out, std::string(field) + "[" + Integer(start + k + 1).str() + "]",
                        Integer(lines - visited).str() + " line(s) with label " + block[k]->str() + " in this run are not visited");
            }
        }
    }
}  // namespace

// ---------------------------------------------------------------------------
// Verification

Violations verify_path(const PathPuzzle& p, const GridPath& path)
{
    Violations out = validate(p);
    if (!out.empty())
        return out;
    if (path.cells.empty())
    {
        add(out, "path", "empty path");
        return out;
    }
    std::set<Cell> seen;
    std::map<std::int64_t, std::int64_t> row_hits, col_hits;
    for (std::size_t i = 0; i < path.cells.size(); ++i)
    {
        const Cell& c = path.cells[i];
        const std::string locus = "cells[" + std::to_string(i) + "]";
        if (c.row < 1 || c.row > p.rows || c.col < 1 || c.col > p.cols)
        {
            add(out, locus, cell_text(c) + " outside the grid");
            continue;
        }
        if (!seen.insert(c).second)
            add(out, locus, cell_text(c) + " visited twice");
        if (i > 0)
        {
            const Cell& b = path.cells[i - 1];
            if (std::abs(b.row - c.row) + std::abs(b.col - c.col) != 1)
                add(out, locus, cell_text(c) + " is not adjacent to " + cell_text(b));
        }
        ++row_hits[c.row];
        ++col_hits[c.col];
    }
    const Cell d0 = door_cell(p.doors[0]), d1 = door_cell(p.doors[1]);
    const Cell& front = path.cells.front();
    const Cell& back = path.cells.back();
    const bool ends_ok = path.cells.size() == 1 ? (front == d0 && front == d1)
                                                : ((front == d0 && back == d1) || (front == d1 && back == d0));
    if (!ends_ok)
        add(out, "path", "endpoints " + cell_text(front) + " and " + cell_text(back) + " are not the door cells "
                             + cell_text(d0) + " and " + cell_text(d1));
    if (!out.empty())
        return out;
    check_line_counts(out, p.row_labels, row_hits, "row_labels");
    check_line_counts(out, p.col_labels, col_hits, "col_labels");
    return out;
}

// ---------------------------------------------------------------------------
// Search

namespace
{
    class PathSearch
    {
    public:
        PathSearch(const PathPuzzle& p, const std::function<void(const GridPath&)>* visit, const SearchOptions& options,
                   SearchStats& stats)
            : m_visit(visit)
            , m_options(options)
            , m_stats(stats)
        {
            if (auto v = validate(p); !v.empty())
                throw PreconditionError("invalid puzzle: " + join(v));
            if (p.rows * p.cols > options.max_cells)
                throw SearchBudgetExceeded("grid of " + p.rows.str() + " x " + p.cols.str()
                                           + " cells exceeds the search cell cap of "
                                           + std::to_string(options.max_cells));
            m_rows = to_int64(p.rows);
            m_cols = to_int64(p.cols);
            m_row_label = labels(p.row_labels);
            m_col_label = labels(p.col_labels);
            const auto cells = static_cast<std::size_t>(m_rows * m_cols);
            m_visited.assign(cells, 0);
            m_stamp.assign(cells, 0);
            m_xstamp.assign(cells, 0);
            m_row_count.assign(static_cast<std::size_t>(m_rows), 0);
            m_col_count.assign(static_cast<std::size_t>(m_cols), 0);
            m_row_must.assign(static_cast<std::size_t>(m_rows), 0);
            m_col_must.assign(static_cast<std::size_t>(m_cols), 0);
            m_full_col.assign(static_cast<std::size_t>(m_cols), 0);
            m_full_row.assign(static_cast<std::size_t>(m_rows), 0);
            for (std::int64_t c = 0; c < m_cols; ++c)
                m_full_col[c] = m_col_label[c] == m_rows;
            for (std::int64_t r = 0; r < m_rows; ++r)
                m_full_row[r] = m_row_label[r] == m_cols;
            const auto full_cols = std::count(m_full_col.begin(), m_full_col.end(), 1);
            const auto full_rows = std::count(m_full_row.begin(), m_full_row.end(), 1);
            std::fill(m_row_must.begin(), m_row_must.end(), full_cols);
            std::fill(m_col_must.begin(), m_col_must.end(), full_rows);
            for (auto l : m_row_label)
                m_unsatisfied += l > 0 ? 1 : 0;
            for (auto l : m_col_label)
                m_unsatisfied += l > 0 ? 1 : 0;

            Cell a = door_cell(p.doors[0]), b = door_cell(p.doors[1]);
            if (b < a)
                std::swap(a, b);
            m_start = id(a.row - 1, a.col - 1);
            m_end = id(b.row - 1, b.col - 1);
        }

        SolutionCount run()
        {
            if (!can_enter(m_start))
                return m_count;
            enter(m_start);
            if (m_start == m_end)
            {
                if (m_unsatisfied == 0)
                    found();
                return m_count;
            }
            if (!m_options.paranoid && !flood(m_start))
                return m_count;

            struct Frame
            {
                std::int64_t cell;
                int dir;
            };
            std::vector<Frame> stack{{m_start, 0}};
            while (!stack.empty())
            {
                Frame& top = stack.back();
                if (top.dir == 4)
                {
                    leave(top.cell);
                    stack.pop_back();
                    continue;
                }
                const std::int64_t from = top.cell;
                const std::int64_t next = neighbor(from, top.dir++);
                if (next < 0 || m_visited[static_cast<std::size_t>(next)] || !can_enter(next))
                    continue;
                if (++m_stats.nodes > m_options.node_budget)
                    throw SearchBudgetExceeded("search budget of " + std::to_string(m_options.node_budget)
                                               + " node expansions exceeded");
                enter(next);
                if (next == m_end)
                {
                    if (m_unsatisfied == 0)
                        found();
                    leave(next);
                    continue;
                }
                if (!m_options.paranoid && !lookahead(from, next))
                {
                    leave(next);
                    continue;
                }
                stack.push_back({next, 0});
            }
            return m_count;
        }

    private:
        static std::vector<std::int64_t> labels(const RunSequence<Label>& seq)
        {
            std::vector<std::int64_t> out;
            for (const auto& l : seq.to_vector())
                out.push_back(l ? to_int64(*l) : -1);
            return out;
        }

        std::int64_t id(std::int64_t r, std::int64_t c) const { return r * m_cols + c; }
        std::int64_t row_of(std::int64_t cell) const { return cell / m_cols; }
        std::int64_t col_of(std::int64_t cell) const { return cell % m_cols; }

        std::int64_t neighbor(std::int64_t cell, int dir) const
        {
            static constexpr std::array<int, 4> dr{1, 0, -1, 0}, dc{0, 1, 0, -1};
            const std::int64_t r = row_of(cell) + dr[static_cast<std::size_t>(dir)];
            const std::int64_t c = col_of(cell) + dc[static_cast<std::size_t>(dir)];
            if (r < 0 || r >= m_rows || c < 0 || c >= m_cols)
                return -1;
            return id(r, c);
        }

        bool saturated_row(std::int64_t r) const { return m_row_label[r] >= 0 && m_row_count[r] >= m_row_label[r]; }
        bool saturated_col(std::int64_t c) const { return m_col_label[c] >= 0 && m_col_count[c] >= m_col_label[c]; }

        bool available(std::int64_t r, std::int64_t c) const
        {
            if (r < 0 || r >= m_rows || c < 0 || c >= m_cols)
                return false;
            return !m_visited[static_cast<std::size_t>(id(r, c))] && !saturated_row(r) && !saturated_col(c);
        }

        bool can_enter(std::int64_t cell) const
        {
            const std::int64_t r = row_of(cell), c = col_of(cell);
            if (saturated_row(r) || saturated_col(c))
                return false;
            if (m_options.paranoid)
                return true;
            // Cells in full lines must all be visited eventually; they bound the other direction.
            if (m_row_label[r] >= 0 && m_row_count[r] + 1 + m_row_must[r] - m_full_col[c] > m_row_label[r])
                return false;
            if (m_col_label[c] >= 0 && m_col_count[c] + 1 + m_col_must[c] - m_full_row[r] > m_col_label[c])
                return false;
            return true;
        }

        void count_line(std::int64_t label, std::int64_t before, std::int64_t after)
        {
            if (label < 0)
                return;
            m_unsatisfied += (after != label) - (before != label);
        }

        void enter(std::int64_t cell)
        {
            const std::int64_t r = row_of(cell), c = col_of(cell);
            m_visited[static_cast<std::size_t>(cell)] = 1;
            count_line(m_row_label[r], m_row_count[r], m_row_count[r] + 1);
            count_line(m_col_label[c], m_col_count[c], m_col_count[c] + 1);
            ++m_row_count[r];
            ++m_col_count[c];
            m_row_must[r] -= m_full_col[c];
            m_col_must[c] -= m_full_row[r];
            m_path.push_back(cell);
        }

        void leave(std::int64_t cell)
        {
            const std::int64_t r = row_of(cell), c = col_of(cell);
            m_visited[static_cast<std::size_t>(cell)] = 0;
            count_line(m_row_label[r], m_row_count[r], m_row_count[r] - 1);
            count_line(m_col_label[c], m_col_count[c], m_col_count[c] - 1);
            --m_row_count[r];
            --m_col_count[c];
            m_row_must[r] += m_full_col[c];
            m_col_must[c] += m_full_row[r];
            m_path.pop_back();
        }

        void found()
        {
            ++m_count;
            if (!m_visit || !*m_visit)
                return;
            GridPath path;
            path.cells.reserve(m_path.size());
            for (auto cell : m_path)
                path.cells.push_back(Cell{row_of(cell) + 1, col_of(cell) + 1});
            (*m_visit)(canonical(std::move(path)));
        }

        /// Floods only when the last step may have cut the reachable region: a line became
        /// saturated, or the free cells around the two latest cells split into several arcs.
        bool lookahead(std::int64_t from, std::int64_t to)
        {
            const std::int64_t r = row_of(to), c = col_of(to);
            if (saturated_row(r) || saturated_col(c))
                return flood(to);
            const std::int64_t r0 = std::min(row_of(from), r), r1 = std::max(row_of(from), r);
            const std::int64_t c0 = std::min(col_of(from), c), c1 = std::max(col_of(from), c);
            // Ring of cells around the bounding box of the domino, in cyclic order.
            std::array<std::pair<std::int64_t, std::int64_t>, 10> ring;
            std::size_t k = 0;
            for (std::int64_t cc = c0 - 1; cc <= c1 + 1; ++cc)
                ring[k++] = {r1 + 1, cc};
            for (std::int64_t rr = r1; rr >= r0; --rr)
                ring[k++] = {rr, c1 + 1};
            for (std::int64_t cc = c1 + 1; cc >= c0 - 1; --cc)
                if (cc != c1 + 1)
                    ring[k++] = {r0 - 1, cc};
            for (std::int64_t rr = r0; rr <= r1; ++rr)
                ring[k++] = {rr, c0 - 1};
            int arcs = 0;
            bool any = false;
            for (std::size_t i = 0; i < k; ++i)
            {
                const bool here = available(ring[i].first, ring[i].second);
                const bool prev = available(ring[(i + k - 1) % k].first, ring[(i + k - 1) % k].second);
                any = any || here;
                arcs += here && !prev ? 1 : 0;
            }
            if (!any)
                return false;
            bool exits = false;
            for (int d = 0; d < 4; ++d)
            {
                const std::int64_t nb = neighbor(to, d);
                exits = exits || (nb >= 0 && available(row_of(nb), col_of(nb)));
            }
            if (!exits)
                return false;
            // Cells that must be visited need two ways in and out (one for the end door).
            for (std::int64_t around : {from, to})
                for (int d = 0; d < 4; ++d)
                {
                    const std::int64_t w = neighbor(around, d);
                    if (w >= 0 && !m_visited[static_cast<std::size_t>(w)] && mandatory(w)
                        && degree(w, to, nullptr) < (w == m_end ? 1 : 2))
                        return false;
                }
            if (arcs <= 1)
                return true;
            return flood(to);
        }

        bool mandatory(std::int64_t cell) const
        {
            return m_full_col[static_cast<std::size_t>(col_of(cell))] || m_full_row[static_cast<std::size_t>(row_of(cell))];
        }

        /// Labels minus visits minus cells still owed to full crossing lines; blank lines are unbounded.
        std::int64_t free_row(std::int64_t r) const
        {
            return m_row_label[r] < 0 ? kUnbounded : m_row_label[r] - m_row_count[r] - m_row_must[r];
        }
        std::int64_t free_col(std::int64_t c) const
        {
            return m_col_label[c] < 0 ? kUnbounded : m_col_label[c] - m_col_count[c] - m_col_must[c];
        }

        bool excluded(std::int64_t cell) const { return m_xstamp[static_cast<std::size_t>(cell)] == m_epoch; }

        /// Neighbors the path could still use to enter or leave `cell`: free cells (not excluded
        /// by the current flood, when given) plus the head.
        int degree(std::int64_t cell, std::int64_t head, const std::uint32_t* flood_epoch) const
        {
            int deg = 0;
            for (int d = 0; d < 4; ++d)
            {
                const std::int64_t nb = neighbor(cell, d);
                if (nb < 0)
                    continue;
                if (nb == head)
                    ++deg;
                else if (available(row_of(nb), col_of(nb)) && !(flood_epoch && excluded(nb)))
                    ++deg;
            }
            return deg;
        }

        /// True when `cell` (not mandatory) cannot be left through the other axis: the path through
        /// it must continue straight along `horizontal ? row : column`.
        bool straight_only(std::int64_t cell, std::int64_t head, bool horizontal) const
        {
            const std::int64_t r = row_of(cell), c = col_of(cell);
            const std::int64_t cross_free = horizontal ? free_col(c) : free_row(r);
            for (int d = horizontal ? 0 : 1; d < 4; d += 2)
            {
                const std::int64_t w = neighbor(cell, d);
                if (w < 0)
                    continue;
                if (w == head)
                    return false;
                const std::int64_t wr = row_of(w), wc = col_of(w);
                if (!available(wr, wc))
                    continue;
                const bool w_owed = mandatory(w);
                const std::int64_t w_other = horizontal ? free_row(wr) : free_col(wc);
                if (cross_free >= 1 + (w_owed ? 0 : 1) && (w_owed || w_other >= 1))
                    return false;
            }
            return true;
        }

        /// Excludes optional cells that can no longer be used: those in a line without spare
        /// capacity, and maximal straight-only stretches longer than their line's spare capacity
        /// (using any cell of such a stretch forces the path through all of it).
        void exclude_unusable(std::int64_t head)
        {
            for (std::int64_t cell = 0; cell < m_rows * m_cols; ++cell)
                if (!m_visited[static_cast<std::size_t>(cell)] && !mandatory(cell)
                    && (free_row(row_of(cell)) < 1 || free_col(col_of(cell)) < 1))
                    m_xstamp[static_cast<std::size_t>(cell)] = m_epoch;
            auto stretches = [&](bool horizontal) {
                const std::int64_t lines = horizontal ? m_rows : m_cols;
                const std::int64_t length = horizontal ? m_cols : m_rows;
                for (std::int64_t l = 0; l < lines; ++l)
                {
                    const std::int64_t spare = horizontal ? free_row(l) : free_col(l);
                    if (spare >= kUnbounded)
                        continue;
                    std::int64_t begin = 0;
                    bool has_end = false;
                    auto close = [&](std::int64_t stop) {
                        if (stop - begin > spare && !has_end)
                            for (std::int64_t k = begin; k < stop; ++k)
                                m_xstamp[static_cast<std::size_t>(horizontal ? id(l, k) : id(k, l))] = m_epoch;
                    };
                    for (std::int64_t k = 0; k <= length; ++k)
                    {
                        bool in = false;
                        if (k < length)
                        {
                            const std::int64_t cell = horizontal ? id(l, k) : id(k, l);
                            in = !m_visited[static_cast<std::size_t>(cell)] && !mandatory(cell)
                                 && available(row_of(cell), col_of(cell)) && straight_only(cell, head, horizontal);
                            if (in && begin == k)
                                has_end = false;
                            if (in)
                                has_end = has_end || cell == m_end;
                        }
                        if (!in)
                        {
                            close(k);
                            begin = k + 1;
                            has_end = false;
                        }
                    }
                }
            };
            stretches(true);
            stretches(false);
        }

        /// Reachability from the head over free cells: the end door must be reachable and every
        /// labeled line must still be able to reach its label.
        bool flood(std::int64_t head)
        {
            ++m_stats.floods;
            ++m_epoch;
            exclude_unusable(head);
            m_reach_row.assign(static_cast<std::size_t>(m_rows), 0);
            m_reach_col.assign(static_cast<std::size_t>(m_cols), 0);
            m_queue.clear();
            bool end_reached = false;
            auto push_neighbors = [&](std::int64_t cell) {
                for (int d = 0; d < 4; ++d)
                {
                    const std::int64_t nb = neighbor(cell, d);
                    if (nb < 0 || m_stamp[static_cast<std::size_t>(nb)] == m_epoch)
                        continue;
                    if (!available(row_of(nb), col_of(nb)) || excluded(nb))
                        continue;
                    m_stamp[static_cast<std::size_t>(nb)] = m_epoch;
                    ++m_reach_row[static_cast<std::size_t>(row_of(nb))];
                    ++m_reach_col[static_cast<std::size_t>(col_of(nb))];
                    if (nb == m_end)
                        end_reached = true;
                    else
                        m_queue.push_back(nb);
                }
            };
            push_neighbors(head);
            for (std::size_t q = 0; q < m_queue.size(); ++q)
                push_neighbors(m_queue[q]);
            if (!end_reached)
                return false;
            for (std::int64_t r = 0; r < m_rows; ++r)
                if (m_row_label[r] >= 0 && m_row_count[r] + m_reach_row[r] < m_row_label[r])
                    return false;
            for (std::int64_t c = 0; c < m_cols; ++c)
                if (m_col_label[c] >= 0 && m_col_count[c] + m_reach_col[c] < m_col_label[c])
                    return false;
            for (std::int64_t cell = 0; cell < m_rows * m_cols; ++cell)
                if (m_stamp[static_cast<std::size_t>(cell)] == m_epoch && mandatory(cell)
                    && degree(cell, head, &m_epoch) < (cell == m_end ? 1 : 2))
                    return false;
            return true;
        }

        const std::function<void(const GridPath&)>* m_visit;
        SearchOptions m_options;
        SearchStats& m_stats;
        std::int64_t m_rows = 0, m_cols = 0;
        std::vector<std::int64_t> m_row_label, m_col_label;
        std::vector<std::uint8_t> m_visited;
        std::vector<std::uint32_t> m_stamp, m_xstamp;
        std::uint32_t m_epoch = 0;
        std::vector<std::int64_t> m_row_count, m_col_count, m_row_must, m_col_must;
        std::vector<std::int64_t> m_full_row, m_full_col;
        std::vector<std::int64_t> m_reach_row, m_reach_col;
        std::vector<std::int64_t> m_queue;
        std::int64_t m_unsatisfied = 0;
        std::int64_t m_start = 0, m_end = 0;
        std::vector<std::int64_t> m_path;
        SolutionCount m_count;
    };
}  // namespace

namespace
{
    /// Counts paths with a row-by-row frontier sweep (plug dynamic programming). The state is
    /// the plug pattern on the frontier, the visits so far in every column whose label is
    /// neither 0 nor the full height, the visits in the current row and a finished flag.
    /// Plugs: 0 none, 1 opens a segment, 2 closes it, 3 a segment whose other end is a door.
    class TransferCount
    {
    public:
        TransferCount(const PathPuzzle& p, const SearchOptions& options, SearchStats& stats)
            : m_options(options)
            , m_stats(stats)
        {
            if (auto v = validate(p); !v.empty())
                throw PreconditionError("invalid puzzle: " + join(v));
            if (p.rows * p.cols > options.max_cells)
                throw SearchBudgetExceeded("grid of " + p.rows.str() + " x " + p.cols.str()
                                           + " cells exceeds the search cell cap of "
                                           + std::to_string(options.max_cells));
            m_rows = to_int64(p.rows);
            m_cols = to_int64(p.cols);
            for (const auto& l : p.row_labels.to_vector())
                m_row_label.push_back(l ? to_int64(*l) : -1);
            for (const auto& l : p.col_labels.to_vector())
                m_col_label.push_back(l ? to_int64(*l) : -1);
            m_slot.assign(static_cast<std::size_t>(m_cols), -1);
            for (std::int64_t c = 0; c < m_cols; ++c)
                if (m_col_label[c] > 0 && m_col_label[c] < m_rows)
                    m_slot[c] = m_tracked++;
            m_doors = {door_cell(p.doors[0]), door_cell(p.doors[1])};
            // Cells still owed to full lines bound the visits left for a partial line.
            m_full_rows_below.assign(static_cast<std::size_t>(m_rows), 0);
            for (std::int64_t r = 1; r < m_rows; ++r)
                m_full_rows_below[r] = m_full_rows_below[r - 1] + (m_row_label[r - 1] == m_cols ? 1 : 0);
            m_full_cols_after.assign(static_cast<std::size_t>(m_cols), 0);
            for (std::int64_t c = m_cols - 1; c-- > 0;)
                m_full_cols_after[c] = m_full_cols_after[c + 1] + (m_col_label[c + 1] == m_rows ? 1 : 0);
            for (auto l : m_row_label)
                if (l > 0xffff)
                    throw PreconditionError("row label " + std::to_string(l) + " too large for the frontier counter");
            for (auto l : m_col_label)
                if (l > 0xffff && l != m_rows)
                    throw PreconditionError("column label " + std::to_string(l) + " too large for the frontier counter");
        }

        SolutionCount run()
        {
            if (m_doors[0] == m_doors[1])
                return single_cell();
            // Key layout: plugs[0..C], then one byte per tracked column, row count, finished.
            std::string start(done_slot() + 1, '\0');
            Frontier current{{start, Integer(1)}};
            for (std::int64_t r = m_rows; r >= 1; --r)
            {
                for (std::int64_t c = 1; c <= m_cols; ++c)
                {
                    Frontier next;
                    next.reserve(current.size() * 2);
                    for (const auto& [key, ways] : current)
                        step(key, ways, r, c, next);
                    current = std::move(next);
                    if (current.size() > m_options.max_states)
                        throw SearchBudgetExceeded("frontier of " + std::to_string(current.size())
                                                   + " states exceeds the cap of " + std::to_string(m_options.max_states));
                    if (current.empty())
                        return SolutionCount();
                }
                Frontier next;
                for (auto& [key, ways] : current)
                    if (auto moved = end_row(key, r))
                        next[*moved] += ways;
                current = std::move(next);
            }
            Integer total = 0;
            for (const auto& [key, ways] : current)
                if (key.back() == 1 && columns_done(key))
                    total += ways;
            return SolutionCount(total);
        }

    private:
        using Frontier = std::unordered_map<std::string, Integer>;

        std::size_t plugs() const { return static_cast<std::size_t>(m_cols + 1); }
        std::size_t row_slot() const { return plugs() + 2 * static_cast<std::size_t>(m_tracked); }
        std::size_t done_slot() const { return row_slot() + 2; }

        // Counters take two bytes; labels above 65535 are refused up front.
        static std::int64_t counter(const std::string& key, std::size_t at)
        {
            return static_cast<unsigned char>(key[at]) | (static_cast<unsigned char>(key[at + 1]) << 8);
        }
        static void set_counter(std::string& key, std::size_t at, std::int64_t v)
        {
            key[at] = static_cast<char>(v & 0xff);
            key[at + 1] = static_cast<char>(v >> 8);
        }

        bool is_door(std::int64_t r, std::int64_t c) const
        {
            return (m_doors[0].row == r && m_doors[0].col == c) || (m_doors[1].row == r && m_doors[1].col == c);
        }

        /// Finds the plug matching the 1 or 2 at position i.
        std::size_t partner(const std::string& key, std::size_t i) const
        {
            int depth = 0;
            if (key[i] == 1)
            {
                for (std::size_t j = i; j < plugs(); ++j)
                    if (key[j] == 1)
                        ++depth;
                    else if (key[j] == 2 && --depth == 0)
                        return j;
            }
            else
            {
                for (std::size_t j = i + 1; j-- > 0;)
                    if (key[j] == 2)
                        ++depth;
                    else if (key[j] == 1 && --depth == 0)
                        return j;
            }
            throw ConsistencyError("unbalanced frontier");
        }

        bool no_plugs(const std::string& key) const
        {
            return std::all_of(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(plugs()), [](char v) { return v == 0; });
        }

        /// Applies the visit counters for cell (r, c); false when a label is exceeded or can no
        /// longer be reached.
        bool count_visit(std::string& key, std::int64_t r, std::int64_t c, bool visited) const
        {
            const std::int64_t col_label = m_col_label[c - 1];
            const std::int64_t row_label = m_row_label[r - 1];
            if (visited && (col_label == 0 || row_label == 0))
                return false;
            if (!visited && (col_label == m_rows || row_label == m_cols))
                return false;
            if (const int s = m_slot[c - 1]; s >= 0)
            {
                const std::size_t at = plugs() + 2 * static_cast<std::size_t>(s);
                const std::int64_t seen = counter(key, at) + (visited ? 1 : 0);
                // r - 1 rows remain below this one.
                if (seen + m_full_rows_below[r - 1] > col_label || seen + (r - 1) < col_label)
                    return false;
                set_counter(key, at, seen);
            }
            if (row_label > 0 && row_label < m_cols)
            {
                const std::int64_t seen = counter(key, row_slot()) + (visited ? 1 : 0);
                if (seen + m_full_cols_after[c - 1] > row_label || seen + (m_cols - c) < row_label)
                    return false;
                set_counter(key, row_slot(), seen);
            }
            return true;
        }

        void emit(std::string key, const Integer& ways, std::int64_t r, std::int64_t c, bool visited, Frontier& next)
        {
            if (++m_stats.nodes > m_options.node_budget)
                throw SearchBudgetExceeded("search budget of " + std::to_string(m_options.node_budget)
                                           + " state transitions exceeded");
            if (!count_visit(key, r, c, visited))
                return;
            const std::size_t i = static_cast<std::size_t>(c - 1);
            if (key[i] != 0 && !room_below(key, r, c))
                return;
            if (key[i + 1] != 0 && !room_right(key, r, c))
                return;
            next[std::move(key)] += ways;
        }

        /// A plug leaving (r, c) downwards needs cell (r - 1, c) to accept one more visit.
        bool room_below(const std::string& key, std::int64_t r, std::int64_t c) const
        {
            if (m_row_label[r - 2] == 0)
                return false;
            const std::int64_t label = m_col_label[c - 1];
            if (const int s = m_slot[c - 1]; s >= 0)
                return counter(key, plugs() + 2 * static_cast<std::size_t>(s)) < label;
            return label != 0;
        }

        /// A plug leaving (r, c) to the right; key already counts the visit of (r, c).
        bool room_right(const std::string& key, std::int64_t r, std::int64_t c) const
        {
            const std::int64_t label = m_col_label[c];
            if (label == 0)
                return false;
            if (const int s = m_slot[c]; s >= 0 && counter(key, plugs() + 2 * static_cast<std::size_t>(s)) >= label)
                return false;
            const std::int64_t row_label = m_row_label[r - 1];
            return !(row_label > 0 && row_label < m_cols && counter(key, row_slot()) >= row_label);
        }

        void step(const std::string& key, const Integer& ways, std::int64_t r, std::int64_t c, Frontier& next)
        {
            const std::size_t i = static_cast<std::size_t>(c - 1);
            const char left = key[i], up = key[i + 1];
            const bool can_down = r > 1, can_right = c < m_cols;
            const bool finished = key[done_slot()] == 1;
            auto with = [&](char down, char right) {
                std::string k = key;
                k[i] = down;
                k[i + 1] = right;
                return k;
            };
            if (is_door(r, c))
            {
                if (finished || (left != 0 && up != 0))
                    return;
                if (left == 0 && up == 0)
                {
                    if (can_down)
                        emit(with(3, 0), ways, r, c, true, next);
                    if (can_right)
                        emit(with(0, 3), ways, r, c, true, next);
                    return;
                }
                std::string k = with(0, 0);
                const std::size_t at = left != 0 ? i : i + 1;
                const char end = key[at];
                if (end == 3)
                {
                    if (!no_plugs(k))
                        return;
                    k[done_slot()] = 1;
                }
                else
                    k[partner(key, at)] = 3;
                emit(std::move(k), ways, r, c, true, next);
                return;
            }
            if (left == 0 && up == 0)
            {
                emit(key, ways, r, c, false, next);
                if (!finished && can_down && can_right)
                    emit(with(1, 2), ways, r, c, true, next);
                return;
            }
            if (left == 0 || up == 0)
            {
                const char x = left != 0 ? left : up;
                if (can_down)
                    emit(with(x, 0), ways, r, c, true, next);
                if (can_right)
                    emit(with(0, x), ways, r, c, true, next);
                return;
            }
            std::string k = with(0, 0);
            if (left == 1 && up == 2)
                return;  // would close a cycle
            if (left == 3 && up == 3)
            {
                if (!no_plugs(k))
                    return;
                k[done_slot()] = 1;
            }
            else if (left == 3 || up == 3)
                k[partner(key, left == 3 ? i + 1 : i)] = 3;
            else if (left == 1 && up == 1)
                k[partner(key, i + 1)] = 1;
            else if (left == 2 && up == 2)
                k[partner(key, i)] = 2;
            // left == 2, up == 1: the outer ends already pair up.
            emit(std::move(k), ways, r, c, true, next);
        }

        std::optional<std::string> end_row(const std::string& key, std::int64_t r) const
        {
            if (key[plugs() - 1] != 0)
                return std::nullopt;
            const std::int64_t label = m_row_label[r - 1];
            if (label > 0 && label < m_cols && counter(key, row_slot()) != label)
                return std::nullopt;
            std::string k = key;
            for (std::size_t j = plugs() - 1; j > 0; --j)
                k[j] = k[j - 1];
            k[0] = 0;
            set_counter(k, row_slot(), 0);
            return k;
        }

        bool columns_done(const std::string& key) const
        {
            for (std::int64_t c = 0; c < m_cols; ++c)
                if (m_slot[c] >= 0 && counter(key, plugs() + 2 * static_cast<std::size_t>(m_slot[c])) != m_col_label[c])
                    return false;
            return true;
        }

        SolutionCount single_cell() const
        {
            const Cell d = m_doors[0];
            for (std::int64_t r = 1; r <= m_rows; ++r)
                if (m_row_label[r - 1] >= 0 && m_row_label[r - 1] != (r == d.row ? 1 : 0))
                    return SolutionCount();
            for (std::int64_t c = 1; c <= m_cols; ++c)
                if (m_col_label[c - 1] >= 0 && m_col_label[c - 1] != (c == d.col ? 1 : 0))
                    return SolutionCount();
            return SolutionCount(1);
        }

        const SearchOptions& m_options;
        SearchStats& m_stats;
        std::int64_t m_rows = 0, m_cols = 0;
        std::vector<std::int64_t> m_row_label, m_col_label;
        std::vector<int> m_slot;  ///< counter index per column, -1 when the label needs none
        std::vector<std::int64_t> m_full_rows_below, m_full_cols_after;
        int m_tracked = 0;
        std::array<Cell, 2> m_doors;
    };
}  // namespace

void for_each_path(const PathPuzzle& p, const std::function<void(const GridPath&)>& visit,
                   const SearchOptions& options, SearchStats* stats)
{
    SearchStats local;
    PathSearch(p, &visit, options, stats ? *stats : local).run();
}

SolutionCount count_paths(const PathPuzzle& p, const SearchOptions& options, SearchStats* stats)
{
    SearchStats local;
    if (options.engine == SearchEngine::Transfer || (options.engine == SearchEngine::Auto && !options.paranoid))
        return TransferCount(p, options, stats ? *stats : local).run();
    return PathSearch(p, nullptr, options, stats ? *stats : local).run();
}

std::vector<GridPath> enumerate_paths(const PathPuzzle& p, const SearchOptions& options, SearchStats* stats)
{
    std::vector<GridPath> out;
    for_each_path(p, [&](const GridPath& g) { out.push_back(g); }, options, stats);
    return out;
}

// ---------------------------------------------------------------------------
// Length Offsets -> Path Puzzle

LoToPpArtifact reduce_lo_to_pp(const LengthOffsetsInstance& inst, bool endpoint_disjoint)
{
    if (auto v = validate(inst); !v.empty())
        throw PreconditionError("invalid Length Offsets instance: " + join(v));
    if (inst.lengths.empty() || inst.horizon == 0)
        throw PreconditionError("degenerate Length Offsets instance (n = 0 or m = 0)");
    LoToPpArtifact a;
    a.source = inst;
    a.n = static_cast<std::int64_t>(inst.lengths.size());
    a.m = inst.horizon;
    a.endpoint_disjoint = endpoint_disjoint;
    const std::int64_t n = a.n;
    const Integer R = 2 * a.m + 3;
    a.block_width = 12 * n + 5;

    PathPuzzle& p = a.target;
    p.rows = R;
    p.cols = Integer(12 * n + 6) * n - 1;
    p.doors = {Door{R, 1, Side::Left}, Door{R, p.cols, Side::Right}};

    for (std::int64_t j = 0; j < n; ++j)
    {
        const Integer start = Integer(12 * n + 6) * (j + 1) - (12 * n + 5);
        a.block_start.push_back(start);
        a.middle.push_back(start + 6 * n + 2);
        p.col_labels.append(R, 2);
        p.col_labels.append(Integer(1), 6 * n);
        p.col_labels.append(2 * inst.lengths[static_cast<std::size_t>(j)] + 1);
        p.col_labels.append(Integer(1), 6 * n);
        p.col_labels.append(R, 2);
        if (j + 1 < n)
        {
            a.lone.push_back(Integer(12 * n + 6) * (j + 1));
            p.col_labels.append(Integer(1));
        }
    }

    // Bottom-up: blank, then (4n + t_i, blank) for each i, then 4n and 5n - 1.
    p.row_labels.append(std::nullopt);
    for (const auto& run : inst.densities.runs())
    {
        std::vector<Label> cycle;
        for (const auto& t : run.block())
        {
            cycle.push_back(Integer(4 * n) + t);
            cycle.push_back(std::nullopt);
        }
        p.row_labels.append_cycle(cycle, run.length / run.block().size());
    }
    p.row_labels.append(Integer(4 * n));
    p.row_labels.append(Integer(5 * n - 1));

    if (auto v = validate(p); !v.empty())
        throw ConsistencyError("constructed puzzle is invalid: " + join(v));
    return a;
}

GridPath lift_lo_solution_to_path(const LoToPpArtifact& a, const LengthOffsetsSolution& s)
{
    if (auto v = validate(a.source, s); !v.empty())
        throw PreconditionError("invalid Length Offsets solution: " + join(v));
    Integer total = 0;
    for (const auto& run : a.target.col_labels.runs())
        for (const auto& l : run.block())
            total += *l * run.length / run.block().size();
    if (total > kMaxLiftedPath)
        throw PreconditionError("solution path of " + total.str() + " cells is too long to materialize");

    const std::int64_t R = to_int64(a.target.rows);
    const std::int64_t n = a.n;
    GridPath path;
    path.cells.reserve(total.convert_to<std::size_t>());
    auto put = [&](std::int64_t r, std::int64_t c) { path.cells.push_back(Cell{r, c}); };
    for (std::int64_t j = 0; j < n; ++j)
    {
        const std::int64_t c1 = to_int64(a.block_start[static_cast<std::size_t>(j)]);
        const std::int64_t c2 = c1 + 1;
        const std::int64_t mid = to_int64(a.middle[static_cast<std::size_t>(j)]);
        const std::int64_t d1 = c1 + 12 * n + 3;
        const std::int64_t d2 = d1 + 1;
        const std::int64_t b = to_int64(s.offsets[static_cast<std::size_t>(j)]);
        const std::int64_t len = to_int64(a.source.lengths[static_cast<std::size_t>(j)]);
        const std::int64_t lo = 2 * b + 1;
        const std::int64_t hi = 2 * (len + b) + 1;

        // Left pair: zig-zag down to just above the run, then the U below it.
        for (std::int64_t r = R; r > lo; --r)
        {
            if ((R - r) % 2 == 0)
            {
                put(r, c1);
                put(r, c2);
            }
            else
            {
                put(r, c2);
                put(r, c1);
            }
        }
        for (std::int64_t r = lo; r >= 1; --r)
            put(r, c1);
        for (std::int64_t r = 1; r <= lo; ++r)
            put(r, c2);
        // Left run, middle segment, right run.
        for (std::int64_t c = c2 + 1; c <= mid; ++c)
            put(lo, c);
        for (std::int64_t r = lo + 1; r <= hi; ++r)
            put(r, mid);
        for (std::int64_t c = mid + 1; c <= d1 - 1; ++c)
            put(hi, c);
        // Right pair: the U below the run, then zig-zag up to the top row.
        for (std::int64_t r = hi; r >= 1; --r)
            put(r, d1);
        for (std::int64_t r = 1; r <= hi; ++r)
            put(r, d2);
        for (std::int64_t r = hi + 1; r <= R; ++r)
        {
            if ((r - hi) % 2 == 1)
            {
                put(r, d2);
                put(r, d1);
            }
            else
            {
                put(r, d1);
                put(r, d2);
            }
        }
        if (j + 1 < n)
            put(R, d2 + 1);
    }
    if (auto v = verify_path(a.target, path); !v.empty())
        throw ConsistencyError("lifted path fails verification: " + join(v));
    return path;
}

LengthOffsetsSolution project_path_to_lo(const LoToPpArtifact& a, const GridPath& path)
{
    if (auto v = verify_path(a.target, path); !v.empty())
        throw PreconditionError("path does not solve the puzzle: " + join(v));
    std::map<std::int64_t, std::vector<std::int64_t>> by_column;
    for (const auto& c : path.cells)
        by_column[c.col].push_back(c.row);
    LengthOffsetsSolution out;
    for (std::size_t j = 0; j < a.middle.size(); ++j)
    {
        auto rows = by_column[to_int64(a.middle[j])];
        std::sort(rows.begin(), rows.end());
        const std::string where = "middle column of block " + std::to_string(j + 1);
        if (rows.empty() || rows.back() - rows.front() + 1 != static_cast<std::int64_t>(rows.size()))
            throw ConsistencyError(where + " is not a single vertical segment");
        if (rows.front() % 2 == 0)
            throw ConsistencyError(where + " starts in a labeled row");
        out.offsets.emplace_back((rows.front() - 1) / 2);
    }
    if (auto v = validate(a.source, out); !v.empty())
        throw ConsistencyError("projected offsets are invalid: " + join(v));
    return out;
}

PathPuzzle complete_row_labels(const LoToPpArtifact& a)
{
    if (!a.endpoint_disjoint)
        throw PreconditionError("label completion needs the endpoint-disjointness guarantee");
    const Integer n = a.n;
    auto blank_label = [&](const Integer& before, const Integer& after) -> Label {
        const Integer change = before > after ? before - after : after - before;
        return 4 * n + (6 * n + 1) * change + std::min(before, after);
    };

    PathPuzzle p = a.target;
    p.row_labels = RunSequence<Label>();
    const auto& runs = a.source.densities.runs();
    p.row_labels.append(blank_label(0, runs.front().value));
    // Each density t_i contributes its labeled row and the blank row above it. Inside a
    // constant run both are 4n + t_i, so long runs stay compressed.
    for (std::size_t r = 0; r < runs.size(); ++r)
    {
        const auto block = runs[r].block();
        const Integer repeats = runs[r].length / block.size();
        const Integer next = r + 1 < runs.size() ? runs[r + 1].value : Integer(0);
        std::vector<Label> cycle;
        for (std::size_t k = 0; k < block.size(); ++k)
        {
            cycle.push_back(4 * n + block[k]);
            cycle.push_back(blank_label(block[k], block[(k + 1) % block.size()]));
        }
        p.row_labels.append_cycle(cycle, repeats - 1);
        for (std::size_t k = 0; k < block.size(); ++k)
        {
            p.row_labels.append(4 * n + block[k]);
            p.row_labels.append(blank_label(block[k], k + 1 < block.size() ? block[k + 1] : next));
        }
    }
    p.row_labels.append(4 * n);
    p.row_labels.append(5 * n - 1);
    if (auto v = validate(p); !v.empty())
        throw ConsistencyError("completed puzzle is invalid: " + join(v));
    return p;
}

}  // namespace pathred
