#include "segparse/re.hpp"

#include <cctype>
#include <map>

#include "segparse/error.hpp"

namespace segparse {

const char* kind_name(ReKind k) noexcept
{
	switch (k) {
	case ReKind::terminal: return "terminal";
	case ReKind::epsilon: return "epsilon";
	case ReKind::char_class: return "char-class";
	case ReKind::wildcard: return "wildcard";
	case ReKind::concat: return "concat";
	case ReKind::alt: return "union";
	case ReKind::star: return "star";
	case ReKind::cross: return "cross";
	case ReKind::optional: return "optional";
	case ReKind::repeat: return "bounded-repeat";
	case ReKind::group: return "group";
	}
	return "?";
}

namespace {

constexpr std::size_t max_bound = 1000;

CharSet range_set(unsigned lo, unsigned hi)
{
	CharSet s;
	for (unsigned c = lo; c <= hi; ++c)
		s.set(c);
	return s;
}

CharSet digit_set() { return range_set('0', '9'); }
CharSet space_set()
{
	CharSet s;
	for (char c : std::string_view(" \t\n\r\f\v"))
		s.set(static_cast<unsigned char>(c));
	return s;
}
CharSet word_set()
{
	CharSet s = range_set('a', 'z') | range_set('A', 'Z') | digit_set();
	s.set('_');
	return s;
}

class Parser {
public:
	explicit Parser(std::string_view src) : src_(src) { ast_.source = std::string(src); }

	ReAst run()
	{
		if (src_.empty())
			throw syntax_error("empty expression", 0);
		ast_.root = alternation();
		if (pos_ < src_.size()) {
			if (src_[pos_] == ')')
				throw syntax_error("unbalanced ')'", pos_);
			throw syntax_error("unexpected character", pos_);
		}
		return std::move(ast_);
	}

private:
	std::string_view src_;
	std::size_t pos_ = 0;
	ReAst ast_;

	bool at_end() const { return pos_ >= src_.size(); }
	char peek() const { return src_[pos_]; }

	std::size_t add(ReNode n)
	{
		ast_.nodes.push_back(std::move(n));
		return ast_.nodes.size() - 1;
	}

	std::size_t leaf(ReKind k, CharSet cs, std::size_t b, std::size_t e)
	{
		ReNode n;
		n.kind = k;
		n.chars = cs;
		n.begin = b;
		n.end = e;
		return add(std::move(n));
	}

	std::size_t alternation()
	{
		std::size_t b = pos_;
		std::vector<std::size_t> alts;
		alts.push_back(sequence());
		while (!at_end() && peek() == '|') {
			++pos_;
			alts.push_back(sequence());
		}
		if (alts.size() == 1)
			return alts[0];
		ReNode n;
		n.kind = ReKind::alt;
		n.children = std::move(alts);
		n.begin = b;
		n.end = pos_;
		return add(std::move(n));
	}

	std::size_t sequence()
	{
		std::size_t b = pos_;
		std::vector<std::size_t> items;
		while (!at_end() && peek() != '|' && peek() != ')')
			items.push_back(quantified());
		if (items.empty())
			return leaf(ReKind::epsilon, {}, b, b);
		if (items.size() == 1)
			return items[0];
		ReNode n;
		n.kind = ReKind::concat;
		n.children = std::move(items);
		n.begin = b;
		n.end = pos_;
		return add(std::move(n));
	}

	std::size_t number()
	{
		std::size_t b = pos_;
		std::size_t v = 0;
		while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
			v = v * 10 + static_cast<std::size_t>(peek() - '0');
			if (v > max_bound)
				throw syntax_error("repetition bound too large", b);
			++pos_;
		}
		if (pos_ == b)
			throw syntax_error("expected a number", pos_);
		return v;
	}

	std::size_t quantified()
	{
		std::size_t b = pos_;
		std::size_t item = atom();
		while (!at_end()) {
			char c = peek();
			ReNode n;
			n.begin = b;
			if (c == '*')
				n.kind = ReKind::star;
			else if (c == '+')
				n.kind = ReKind::cross;
			else if (c == '?')
				n.kind = ReKind::optional;
			else if (c == '{') {
				std::size_t qb = pos_;
				++pos_;
				n.kind = ReKind::repeat;
				n.min = number();
				n.max = n.min;
				if (!at_end() && peek() == ',') {
					++pos_;
					if (!at_end() && peek() == '}')
						n.unbounded = true;
					else
						n.max = number();
				}
				if (at_end() || peek() != '}')
					throw syntax_error("unterminated repetition", qb);
				if (!n.unbounded && n.max < n.min)
					throw syntax_error("repetition bounds out of order", qb);
			} else
				break;
			++pos_;
			n.end = pos_;
			n.children.push_back(item);
			item = add(std::move(n));
		}
		return item;
	}

	unsigned hex_digit(std::size_t at)
	{
		if (at >= src_.size())
			throw syntax_error("truncated hex escape", at);
		char c = src_[at];
		if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
		if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
		if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
		throw syntax_error("bad hex digit", at);
	}

	// Parses the escape after a backslash at pos_-1. Returns either a single byte
	// (is_set = false) or a class.
	CharSet escape(bool& is_set, std::size_t start)
	{
		if (at_end())
			throw syntax_error("trailing backslash", start);
		char c = peek();
		++pos_;
		is_set = false;
		CharSet s;
		switch (c) {
		case 'n': s.set('\n'); return s;
		case 't': s.set('\t'); return s;
		case 'r': s.set('\r'); return s;
		case 'f': s.set('\f'); return s;
		case 'v': s.set('\v'); return s;
		case '0': s.set(0); return s;
		case 'x': {
			unsigned v = hex_digit(pos_) * 16 + hex_digit(pos_ + 1);
			pos_ += 2;
			s.set(v);
			return s;
		}
		case 'd': is_set = true; return digit_set();
		case 'D': is_set = true; return ~digit_set();
		case 's': is_set = true; return space_set();
		case 'S': is_set = true; return ~space_set();
		case 'w': is_set = true; return word_set();
		case 'W': is_set = true; return ~word_set();
		default: break;
		}
		if (std::isdigit(static_cast<unsigned char>(c)))
			throw syntax_error("backreferences are not supported", start);
		if (std::isalpha(static_cast<unsigned char>(c)))
			throw syntax_error(std::string("unsupported escape \\") + c, start);
		s.set(static_cast<unsigned char>(c));
		return s;
	}

	std::size_t bracket()
	{
		std::size_t b = pos_;
		++pos_; // '['
		bool negate = false;
		if (!at_end() && peek() == '^') {
			negate = true;
			++pos_;
		}
		CharSet s;
		bool first = true;
		for (;;) {
			if (at_end())
				throw syntax_error("unterminated character class", b);
			char c = peek();
			if (c == ']' && !first) {
				++pos_;
				break;
			}
			first = false;
			std::size_t at = pos_;
			unsigned lo;
			if (c == '\\') {
				++pos_;
				bool is_set;
				CharSet e = escape(is_set, at);
				if (is_set) {
					s |= e;
					continue;
				}
				lo = static_cast<unsigned>(e._Find_first());
			} else {
				lo = static_cast<unsigned char>(c);
				++pos_;
			}
			if (pos_ + 1 < src_.size() && peek() == '-' && src_[pos_ + 1] != ']') {
				++pos_;
				std::size_t hat = pos_;
				unsigned hi;
				if (peek() == '\\') {
					++pos_;
					bool is_set;
					CharSet e = escape(is_set, hat);
					if (is_set)
						throw syntax_error("class escape cannot end a range", hat);
					hi = static_cast<unsigned>(e._Find_first());
				} else {
					hi = static_cast<unsigned char>(peek());
					++pos_;
				}
				if (hi < lo)
					throw syntax_error("range out of order", at);
				s |= range_set(lo, hi);
			} else
				s.set(lo);
		}
		if (negate)
			s = ~s;
		if (s.none())
			throw syntax_error("empty character class", b);
		return leaf(ReKind::char_class, s, b, pos_);
	}

	std::size_t atom()
	{
		std::size_t b = pos_;
		char c = peek();
		switch (c) {
		case '(': {
			++pos_;
			if (!at_end() && peek() == '?')
				throw syntax_error("group modifiers are not supported", b);
			if (!at_end() && peek() == ')') {
				++pos_;
				return leaf(ReKind::epsilon, {}, b, pos_);
			}
			std::size_t inner = alternation();
			if (at_end() || peek() != ')')
				throw syntax_error("unbalanced '('", b);
			++pos_;
			ReNode n;
			n.kind = ReKind::group;
			n.children.push_back(inner);
			n.begin = b;
			n.end = pos_;
			return add(std::move(n));
		}
		case '[':
			return bracket();
		case '.': {
			++pos_;
			CharSet s;
			s.set();
			s.reset('\n');
			return leaf(ReKind::wildcard, s, b, pos_);
		}
		case '\\': {
			++pos_;
			bool is_set;
			CharSet s = escape(is_set, b);
			return leaf(is_set ? ReKind::char_class : ReKind::terminal, s, b, pos_);
		}
		case '*':
		case '+':
		case '?':
		case '{':
			throw syntax_error("quantifier without operand", b);
		case '^':
		case '$':
			throw syntax_error("anchors are not supported", b);
		default: {
			++pos_;
			CharSet s;
			s.set(static_cast<unsigned char>(c));
			return leaf(ReKind::terminal, s, b, pos_);
		}
		}
	}
};

bool is_meta(unsigned char c)
{
	return std::string_view("()[]{}|*+?.\\^$").find(static_cast<char>(c)) != std::string_view::npos;
}

std::string escaped_char(unsigned char c, bool in_class)
{
	static const char* hex = "0123456789abcdef";
	if (c < 0x20 || c >= 0x7f) {
		std::string s = "\\x";
		s += hex[c >> 4];
		s += hex[c & 15];
		return s;
	}
	if (in_class ? (c == ']' || c == '\\' || c == '^' || c == '-') : is_meta(c))
		return std::string("\\") + static_cast<char>(c);
	return std::string(1, static_cast<char>(c));
}

std::string class_text(const CharSet& s)
{
	std::string out = "[";
	for (unsigned c = 0; c < 256;) {
		if (!s.test(c)) {
			++c;
			continue;
		}
		unsigned e = c;
		while (e + 1 < 256 && s.test(e + 1))
			++e;
		out += escaped_char(static_cast<unsigned char>(c), true);
		if (e > c + 1)
			out += '-';
		if (e > c)
			out += escaped_char(static_cast<unsigned char>(e), true);
		c = e + 1;
	}
	return out + "]";
}

void print(const ReAst& ast, std::size_t i, std::string& out)
{
	const ReNode& n = ast[i];
	switch (n.kind) {
	case ReKind::terminal:
		out += escaped_char(static_cast<unsigned char>(n.chars._Find_first()), false);
		return;
	case ReKind::epsilon:
		out += "()";
		return;
	case ReKind::char_class:
		out += class_text(n.chars);
		return;
	case ReKind::wildcard:
		out += '.';
		return;
	case ReKind::concat:
		for (std::size_t c : n.children)
			print(ast, c, out);
		return;
	case ReKind::alt:
		for (std::size_t k = 0; k < n.children.size(); ++k) {
			if (k)
				out += '|';
			print(ast, n.children[k], out);
		}
		return;
	case ReKind::group:
		out += '(';
		print(ast, n.children[0], out);
		out += ')';
		return;
	case ReKind::star:
		print(ast, n.children[0], out);
		out += '*';
		return;
	case ReKind::cross:
		print(ast, n.children[0], out);
		out += '+';
		return;
	case ReKind::optional:
		print(ast, n.children[0], out);
		out += '?';
		return;
	case ReKind::repeat:
		print(ast, n.children[0], out);
		out += '{' + std::to_string(n.min);
		if (n.unbounded)
			out += ',';
		else if (n.max != n.min)
			out += ',' + std::to_string(n.max);
		out += '}';
		return;
	}
}

bool same_node(const ReAst& a, std::size_t i, const ReAst& b, std::size_t j)
{
	const ReNode& x = a[i];
	const ReNode& y = b[j];
	if (x.kind != y.kind || x.children.size() != y.children.size())
		return false;
	if (x.chars != y.chars)
		return false;
	if (x.kind == ReKind::repeat &&
	    (x.min != y.min || x.unbounded != y.unbounded || (!x.unbounded && x.max != y.max)))
		return false;
	for (std::size_t k = 0; k < x.children.size(); ++k)
		if (!same_node(a, x.children[k], b, y.children[k]))
			return false;
	return true;
}

} // namespace

ReAst parse_re(std::string_view source)
{
	return Parser(source).run();
}

std::string to_string(const ReAst& ast)
{
	std::string out;
	print(ast, ast.root, out);
	return out;
}

bool same_structure(const ReAst& a, const ReAst& b)
{
	return same_node(a, a.root, b, b.root);
}

std::vector<CharSet> partition_sets(const std::vector<CharSet>& sets)
{
	// Group bytes by their membership vector over the input sets.
	std::map<std::vector<bool>, CharSet> groups;
	std::vector<std::pair<unsigned, std::vector<bool>>> order;
	for (unsigned c = 0; c < 256; ++c) {
		std::vector<bool> key(sets.size());
		bool any = false;
		for (std::size_t k = 0; k < sets.size(); ++k) {
			key[k] = sets[k].test(c);
			any = any || key[k];
		}
		if (!any)
			continue;
		auto [it, fresh] = groups.try_emplace(key);
		if (fresh)
			order.emplace_back(c, key);
		it->second.set(c);
	}
	std::vector<CharSet> cells;
	cells.reserve(order.size());
	for (auto& [first, key] : order)
		cells.push_back(groups[key]);
	return cells;
}

std::vector<CharSet> partition_classes(const ReAst& ast)
{
	std::vector<CharSet> sets;
	for (const ReNode& n : ast.nodes)
		if (n.kind == ReKind::terminal || n.kind == ReKind::char_class || n.kind == ReKind::wildcard)
			sets.push_back(n.chars);
	return partition_sets(sets);
}

std::string char_label(unsigned char c)
{
	return escaped_char(c, false);
}

std::string set_label(const CharSet& s)
{
	return class_text(s);
}

} // namespace segparse
