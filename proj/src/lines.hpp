#ifndef HBG_SRC_LINES_HPP
#define HBG_SRC_LINES_HPP

#include <cctype>
#include <string>
#include <utility>
#include <vector>

namespace hbg::detail {

inline std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

// Strips a comment: '#' to end of line, except when the '#' is immediately
// followed by a digit (that is a positional relation reference, not a
// comment).
inline std::string strip_comment(const std::string& line) {
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '#' &&
            !(i + 1 < line.size() && std::isdigit(static_cast<unsigned char>(line[i + 1]))))
            return line.substr(0, i);
    }
    return line;
}

// Splits text into logical lines: comments stripped, a trailing backslash
// joins the next physical line, blank results dropped.  Each entry carries
// the 1-based number of its first physical line.
inline std::vector<std::pair<int, std::string>> logical_lines(const std::string& text) {
    std::vector<std::pair<int, std::string>> out;
    std::string pending;
    int pending_line = 0;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string phys = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string body = trim(strip_comment(phys));
        bool continued = !body.empty() && body.back() == '\\';
        if (continued)
            body = trim(body.substr(0, body.size() - 1));
        if (pending.empty()) {
            pending = body;
            pending_line = line_no;
        } else if (!body.empty()) {
            pending += ' ';
            pending += body;
        }
        if (!continued) {
            if (!pending.empty())
                out.emplace_back(pending_line, pending);
            pending.clear();
        }
    }
    if (!pending.empty())
        out.emplace_back(pending_line, pending);
    return out;
}

} // namespace hbg::detail

#endif
