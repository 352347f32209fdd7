#include <pathred/text_io.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace pathred
{

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what)
    , m_line(line)
    , m_column(column)
{
}

namespace
{
    struct Token
    {
        std::string text;
        std::size_t line;
        std::size_t col;
    };

    struct Line
    {
        std::size_t number;
        std::vector<Token> tokens;
    };

    std::vector<Line> lex(std::string_view text)
    {
        std::vector<Line> lines;
        std::size_t number = 0;
        std::size_t pos = 0;
        while (pos <= text.size())
        {
            ++number;
            std::size_t end = text.find('\n', pos);
            if (end == std::string_view::npos)
                end = text.size();
            std::string_view raw = text.substr(pos, end - pos);
            if (auto hash = raw.find('#'); hash != std::string_view::npos)
                raw = raw.substr(0, hash);
            Line line{number, {}};
            std::size_t i = 0;
            while (i < raw.size())
            {
                while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i])))
                    ++i;
                std::size_t start = i;
                while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i])))
                    ++i;
                if (i > start)
                    line.tokens.push_back(Token{std::string(raw.substr(start, i - start)), number, start + 1});
            }
            if (!line.tokens.empty())
                lines.push_back(std::move(line));
            pos = end + 1;
        }
        return lines;
    }

    bool is_integer(const std::string& s)
    {
        std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
        if (i == s.size())
            return false;
        return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                           [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    }

    class Reader
    {
    public:
        explicit Reader(std::string_view text) : m_lines(lex(text)) {}

        const Line& next(const std::string& what)
        {
            if (m_pos >= m_lines.size())
            {
                std::size_t line = m_lines.empty() ? 1 : m_lines.back().number + 1;
                throw ParseError(line, 1, "unexpected end of input, expected " + what);
            }
            return m_lines[m_pos++];
        }

        void expect_end()
        {
            if (m_pos < m_lines.size())
            {
                const auto& t = m_lines[m_pos].tokens.front();
                throw ParseError(t.line, t.col, "unexpected trailing content '" + t.text + "'");
            }
        }

    private:
        std::vector<Line> m_lines;
        std::size_t m_pos = 0;
    };

    [[noreturn]] void fail(const Token& t, const std::string& what)
    {
        throw ParseError(t.line, t.col, what + " (got '" + t.text + "')");
    }

    Integer integer(const Token& t)
    {
        if (!is_integer(t.text))
            fail(t, "expected an integer");
        return Integer(t.text);
    }

    Integer nonnegative(const Token& t)
    {
        Integer v = integer(t);
        if (v < 0)
            fail(t, "expected a nonnegative integer");
        return v;
    }

    std::int64_t small(const Token& t)
    {
        Integer v = integer(t);
        if (!fits_int64(v))
            fail(t, "integer out of range");
        return v.convert_to<std::int64_t>();
    }

    void expect_keyword(const Line& line, const std::string& keyword, std::size_t arity)
    {
        const Token& head = line.tokens.front();
        if (head.text != keyword)
            fail(head, "expected '" + keyword + "'");
        if (line.tokens.size() != arity + 1)
        {
            const Token& where = line.tokens.size() > arity + 1 ? line.tokens[arity + 1] : line.tokens.back();
            throw ParseError(where.line, where.col,
                             "'" + keyword + "' takes " + std::to_string(arity) + " fields, got "
                                 + std::to_string(line.tokens.size() - 1));
        }
    }

    void expect_count(const Line& line, std::size_t first, std::size_t count)
    {
        if (line.tokens.size() - first != count)
        {
            const Token& where = line.tokens.size() - first > count ? line.tokens[first + count] : line.tokens.back();
            throw ParseError(where.line, where.col,
                             "expected " + std::to_string(count) + " values, got "
                                 + std::to_string(line.tokens.size() - first));
        }
    }

    std::size_t count_field(const Token& t)
    {
        Integer v = nonnegative(t);
        if (v > 100'000'000)
            fail(t, "count too large");
        return v.convert_to<std::size_t>();
    }

    // Splits a trailing `*r` off a token; returns r (1 when absent).
    Integer split_repeat(Token& head)
    {
        auto star = head.text.find('*');
        if (star == std::string::npos)
            return 1;
        Token count{head.text.substr(star + 1), head.line, head.col + star + 1};
        Integer repeat = nonnegative(count);
        if (repeat == 0)
            fail(count, "run length must be positive");
        head.text = head.text.substr(0, star);
        return repeat;
    }

    // Sequence tokens: `v`, `v*r`, `-`, `-*r`, and blocks `(v w ...)*r`.
    template <typename T, typename ParseValue>
    RunSequence<T> parse_sequence(const Line& line, std::size_t first, const Integer& expected, ParseValue value)
    {
        RunSequence<T> seq;
        for (std::size_t i = first; i < line.tokens.size(); ++i)
        {
            Token head = line.tokens[i];
            if (head.text.empty() || head.text.front() != '(')
            {
                Integer repeat = split_repeat(head);
                seq.append(value(head), repeat);
                continue;
            }
            std::vector<T> block;
            head.text.erase(0, 1);
            ++head.col;
            for (;;)
            {
                Integer repeat = 1;
                if (auto close = head.text.find(')'); close != std::string::npos)
                {
                    Token tail{head.text.substr(close + 1), head.line, head.col + close + 1};
                    if (!tail.text.empty())
                    {
                        if (tail.text.front() != '*')
                            fail(tail, "expected `*` after `)`");
                        tail.text.insert(0, "x");
                        --tail.col;
                        repeat = split_repeat(tail);
                    }
                    head.text.resize(close);
                    if (!head.text.empty())
                        block.push_back(value(head));
                    if (block.empty())
                        fail(head, "empty block");
                    seq.append_cycle(block, repeat);
                    break;
                }
                if (!head.text.empty())
                    block.push_back(value(head));
                if (++i >= line.tokens.size())
                    fail(line.tokens.back(), "unterminated block");
                head = line.tokens[i];
            }
        }
        if (seq.size() != expected)
        {
            const Token& where = line.tokens.back();
            throw ParseError(where.line, where.col,
                             "expected " + expected.str() + " values, got " + seq.size().str());
        }
        return seq;
    }

    template <typename T, typename Format>
    void write_sequence(std::ostream& os, const RunSequence<T>& seq, Format format)
    {
        bool first = true;
        auto sep = [&] {
            if (!first)
                os << ' ';
            first = false;
        };
        if (seq.size() <= kDenseSequenceLimit)
        {
            for (const auto& run : seq.runs())
                for (Integer i = 0; i < run.length; ++i)
                {
                    sep();
                    os << format(run.at_offset(i));
                }
        }
        else
        {
            for (const auto& run : seq.runs())
            {
                sep();
                if (run.cyclic())
                {
                    os << '(';
                    for (std::size_t k = 0; k < run.cycle.size(); ++k)
                        os << (k ? " " : "") << format(run.cycle[k]);
                    os << ")*" << run.length / run.cycle.size();
                    continue;
                }
                os << format(run.value);
                if (run.length > 1)
                    os << '*' << run.length;
            }
        }
    }

    Label label(const Token& t)
    {
        if (t.text == "-")
            return std::nullopt;
        return nonnegative(t);
    }

    std::string label_text(const Label& l) { return l ? l->str() : std::string("-"); }

    std::vector<Integer> integers(const Line& line, std::size_t first, std::size_t count)
    {
        expect_count(line, first, count);
        std::vector<Integer> out;
        for (std::size_t i = first; i < line.tokens.size(); ++i)
            out.push_back(integer(line.tokens[i]));
        return out;
    }

    template <typename Range>
    void write_joined(std::ostream& os, const Range& values)
    {
        bool first = true;
        for (const auto& v : values)
        {
            if (!first)
                os << ' ';
            first = false;
            os << v;
        }
    }
}  // namespace

FileKind detect_kind(std::string_view text)
{
    static const std::map<std::string, FileKind> keywords = {
        {"p1in3", FileKind::Cnf},
        {"3dm", FileKind::ThreeDm},
        {"nkdm", FileKind::Nkdm},
        {"lo", FileKind::LengthOffsets},
        {"pp", FileKind::Puzzle},
        {"path", FileKind::Path},
        {"assign", FileKind::Assignment},
        {"3dm-sol", FileKind::ThreeDmSolution},
        {"nkdm-sol", FileKind::NkdmSolution},
        {"lo-sol", FileKind::LengthOffsetsSolution},
    };
    Reader reader(text);
    const Line& line = reader.next("a header line");
    auto it = keywords.find(line.tokens.front().text);
    if (it == keywords.end())
        fail(line.tokens.front(), "unknown file kind");
    return it->second;
}

std::string kind_name(FileKind kind)
{
    switch (kind)
    {
    case FileKind::Cnf: return "p1in3";
    case FileKind::ThreeDm: return "3dm";
    case FileKind::Nkdm: return "nkdm";
    case FileKind::LengthOffsets: return "lo";
    case FileKind::Puzzle: return "pp";
    case FileKind::Path: return "path";
    case FileKind::Assignment: return "assign";
    case FileKind::ThreeDmSolution: return "3dm-sol";
    case FileKind::NkdmSolution: return "nkdm-sol";
    case FileKind::LengthOffsetsSolution: return "lo-sol";
    }
    return "?";
}

std::string serialize(const Cnf1in3& f)
{
    std::ostringstream os;
    os << "p1in3 " << f.variable_count << ' ' << f.clauses.size() << '\n';
    for (const auto& c : f.clauses)
        os << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
    return os.str();
}

std::string serialize(const Tripartite3dm& g)
{
    std::ostringstream os;
    os << "3dm " << g.part_size << ' ' << g.triples.size() << '\n';
    for (const auto& t : g.triples)
        os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    return os.str();
}

std::string serialize(const NumericalMatchingInstance& inst)
{
    std::ostringstream os;
    os << "nkdm " << inst.k << ' ' << inst.n() << ' ' << inst.target << '\n';
    for (const auto& s : inst.sets)
    {
        write_joined(os, s);
        os << '\n';
    }
    return os.str();
}

std::string serialize(const LengthOffsetsInstance& inst)
{
    std::ostringstream os;
    os << "lo " << inst.lengths.size() << ' ' << inst.horizon << '\n';
    write_joined(os, inst.lengths);
    os << '\n';
    write_sequence(os, inst.densities, [](const Integer& v) { return v.str(); });
    os << '\n';
    return os.str();
}

std::string serialize(const PathPuzzle& p)
{
    std::ostringstream os;
    os << "pp " << p.rows << ' ' << p.cols << '\n';
    os << "doors";
    for (const auto& d : p.doors)
        os << ' ' << d.row << ' ' << d.col << ' ' << side_char(d.side);
    os << '\n';
    os << "rows(bottom-up):";
    if (!p.row_labels.empty())
        os << ' ';
    write_sequence(os, p.row_labels, label_text);
    os << "\ncols:";
    if (!p.col_labels.empty())
        os << ' ';
    write_sequence(os, p.col_labels, label_text);
    os << '\n';
    return os.str();
}

std::string serialize(const GridPath& path)
{
    std::ostringstream os;
    os << "path " << path.cells.size() << '\n';
    for (const auto& c : path.cells)
        os << c.row << ' ' << c.col << '\n';
    return os.str();
}

std::string serialize(const Assignment& a)
{
    std::ostringstream os;
    os << "assign " << a.values.size() << '\n';
    for (std::size_t i = 0; i < a.values.size(); ++i)
        os << (i ? " " : "") << (a.values[i] ? 1 : 0);
    os << '\n';
    return os.str();
}

std::string serialize(const Tripartite3dm& g, const ThreeDmSolution& s)
{
    std::ostringstream os;
    os << "3dm-sol " << s.triples.size() << '\n';
    for (auto idx : s.triples)
    {
        const auto& t = g.triples.at(idx);
        os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
    return os.str();
}

std::string serialize(const NumericalMatchingSolution& s)
{
    std::ostringstream os;
    os << "nkdm-sol " << (s.tuples.empty() ? 0 : s.tuples.front().size()) << ' ' << s.tuples.size() << '\n';
    for (const auto& t : s.tuples)
    {
        write_joined(os, t);
        os << '\n';
    }
    return os.str();
}

std::string serialize(const LengthOffsetsSolution& s)
{
    std::ostringstream os;
    os << "lo-sol " << s.offsets.size() << '\n';
    write_joined(os, s.offsets);
    os << '\n';
    return os.str();
}

Cnf1in3 parse_cnf(std::string_view text)
{
    Reader r(text);
    const Line& header = r.next("'p1in3' header");
    expect_keyword(header, "p1in3", 2);
    Cnf1in3 f;
    f.variable_count = small(header.tokens[1]);
    std::size_t clauses = count_field(header.tokens[2]);
    for (std::size_t c = 0; c < clauses; ++c)
    {
        const Line& line = r.next("a clause line");
        expect_count(line, 0, 3);
        f.clauses.push_back({small(line.tokens[0]), small(line.tokens[1]), small(line.tokens[2])});
    }
    r.expect_end();
    return f;
}

Tripartite3dm parse_3dm(std::string_view text)
{
    Reader r(text);
    const Line& header = r.next("'3dm' header");
    expect_keyword(header, "3dm", 2);
    Tripartite3dm g;
    g.part_size = small(header.tokens[1]);
    std::size_t count = count_field(header.tokens[2]);
    for (std::size_t i = 0; i < count; ++i)
    {
        const Line& line = r.next("a triple line");
        expect_count(line, 0, 3);
        g.triples.push_back({small(line.tokens[0]), small(line.tokens[1]), small(line.tokens[2])});
    }
    r.expect_end();
    return g;
}

NumericalMatchingInstance parse_nkdm(std::string_view text)
{
    Reader r(text);
    const Line& header = r.next("'nkdm' header");
    expect_keyword(header, "nkdm", 3);
    NumericalMatchingInstance inst;
    inst.k = static_cast<int>(small(header.tokens[1]));
    if (inst.k < 1 || inst.k > 16)
        fail(header.tokens[1], "unsupported arity");
    std::size_t n = count_field(header.tokens[2]);
    inst.target = integer(header.tokens[3]);
    for (int s = 0; s < inst.k; ++s)
    {
        if (n == 0)
        {
            inst.sets.emplace_back();
            continue;
        }
        inst.sets.push_back(integers(r.next("a multiset line"), 0, n));
    }
    r.expect_end();
    return inst;
}

LengthOffsetsInstance parse_lo(std::string_view text)
{
    Reader r(text);
    const Line& header = r.next("'lo' header");
    expect_keyword(header, "lo", 2);
    LengthOffsetsInstance inst;
    std::size_t n = count_field(header.tokens[1]);
    inst.horizon = nonnegative(header.tokens[2]);
    if (n > 0)
        inst.lengths = integers(r.next("the lengths line"), 0, n);
    if (inst.horizon > 0)
        inst.densities = parse_sequence<Integer>(r.next("the densities line"), 0, inst.horizon, nonnegative);
    r.expect_end();
    return inst;
}

PathPuzzle parse_puzzle(std::string_view text)
{
    Reader r(text);
    const Line& header = r.next("'pp' header");
    expect_keyword(header, "pp", 2);
    PathPuzzle p;
    p.rows = nonnegative(header.tokens[1]);
    p.cols = nonnegative(header.tokens[2]);

    const Line& doors = r.next("'doors' line");
    expect_keyword(doors, "doors", 6);
    for (std::size_t d = 0; d < 2; ++d)
    {
        p.doors[d].row = integer(doors.tokens[1 + 3 * d]);
        p.doors[d].col = integer(doors.tokens[2 + 3 * d]);
        const Token& side = doors.tokens[3 + 3 * d];
        auto s = side.text.size() == 1 ? side_from_char(side.text[0]) : std::nullopt;
        if (!s)
            fail(side, "expected a side in {L,R,T,B}");
        p.doors[d].side = *s;
    }

    const Line& rows = r.next("'rows(bottom-up):' line");
    if (rows.tokens.front().text != "rows(bottom-up):")
        fail(rows.tokens.front(), "expected 'rows(bottom-up):'");
    p.row_labels = parse_sequence<Label>(rows, 1, p.rows, label);

    const Line& cols = r.next("'cols:' line");
    if (cols.tokens.front().text != "cols:")
        fail(cols.tokens.front(), "expected 'cols:'");
    p.col_labels = parse_sequence<Label>(cols, 1, p.cols, label);
    r.expect_end();
    return p;
}

GridPath parse_path(std::string_view text)
{
    Reader r(text);
    const Line& header = r.next("'path' header");
    expect_keyword(header, "path", 1);
    GridPath path;
    std::size_t len = count_field(header.tokens[1]);
    for (std::size_t i = 0; i < len; ++i)
    {
        const Line& line = r.next("a cell line");
        expect_count(line, 0, 2);
        path.cells.push_back(Cell{small(line.tokens[0]), small(line.tokens[1])});
    }
    r.expect_end();
    return path;
}

Assignment parse_assignment(std::string_view text)
{
    Reader r(text);
    const Line& header = r.next("'assign' header");
    expect_keyword(header, "assign", 1);
    Assignment a;
    std::size_t n = count_field(header.tokens[1]);
    if (n > 0)
    {
        const Line& line = r.next("the values line");
        expect_count(line, 0, n);
        for (const auto& t : line.tokens)
        {
            if (t.text != "0" && t.text != "1")
                fail(t, "expected 0 or 1");
            a.values.push_back(t.text == "1");
        }
    }
    r.expect_end();
    return a;
}

ThreeDmSolution parse_3dm_solution(std::string_view text, const Tripartite3dm& g)
{
    std::map<Triple, std::size_t> index;
    for (std::size_t i = 0; i < g.triples.size(); ++i)
        index.emplace(g.triples[i], i);
    Reader r(text);
    const Line& header = r.next("'3dm-sol' header");
    expect_keyword(header, "3dm-sol", 1);
    ThreeDmSolution s;
    std::size_t count = count_field(header.tokens[1]);
    for (std::size_t i = 0; i < count; ++i)
    {
        const Line& line = r.next("a triple line");
        expect_count(line, 0, 3);
        Triple t{small(line.tokens[0]), small(line.tokens[1]), small(line.tokens[2])};
        auto it = index.find(t);
        if (it == index.end())
            fail(line.tokens[0], "triple is not in the instance");
        s.triples.push_back(it->second);
    }
    r.expect_end();
    std::sort(s.triples.begin(), s.triples.end());
    return s;
}

NumericalMatchingSolution parse_nkdm_solution(std::string_view text)
{
    Reader r(text);
    const Line& header = r.next("'nkdm-sol' header");
    expect_keyword(header, "nkdm-sol", 2);
    std::size_t k = count_field(header.tokens[1]);
    std::size_t n = count_field(header.tokens[2]);
    std::vector<std::vector<Integer>> tuples;
    for (std::size_t i = 0; i < n; ++i)
        tuples.push_back(integers(r.next("a tuple line"), 0, k));
    r.expect_end();
    return NumericalMatchingSolution(std::move(tuples));
}

LengthOffsetsSolution parse_lo_solution(std::string_view text)
{
    Reader r(text);
    const Line& header = r.next("'lo-sol' header");
    expect_keyword(header, "lo-sol", 1);
    LengthOffsetsSolution s;
    std::size_t n = count_field(header.tokens[1]);
    if (n > 0)
        s.offsets = integers(r.next("the offsets line"), 0, n);
    r.expect_end();
    return s;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path);
    out << contents;
}

}  // namespace pathred
