#include "segparse/re.hpp"

#include <algorithm>

#include "segparse/error.hpp"

namespace segparse {

const char* kind_name(NumKind k) noexcept
{
	switch (k) {
	case NumKind::terminal: return "terminal";
	case NumKind::epsilon: return "epsilon";
	case NumKind::concat: return "concat";
	case NumKind::alt: return "union";
	case NumKind::star: return "star";
	case NumKind::cross: return "cross";
	case NumKind::optional: return "optional";
	case NumKind::repeat: return "bounded-repeat";
	case NumKind::group: return "group";
	}
	return "?";
}

namespace {

constexpr std::size_t max_numbers = 1u << 20;

// A parenthesized concat or union is numbered as that operator, so user parens around it
// never add a second pair. Parens around anything else get their own group number.
bool group_is_transparent(ReKind child)
{
	return child == ReKind::alt || child == ReKind::concat;
}

class Numberer {
public:
	Numberer(const ReAst& ast, NumberedRe& out) : ast_(ast), out_(out) {}

	void run()
	{
		const ReNode& r = ast_[ast_.root];
		bool leaf = r.kind == ReKind::terminal || r.kind == ReKind::char_class ||
		            r.kind == ReKind::wildcard || r.kind == ReKind::epsilon;
		if (leaf) {
			std::uint32_t g = make(NumKind::group, ast_.root, no_node);
			attach(g, visit(ast_.root, g));
		} else
			visit(ast_.root, no_node);
	}

private:
	const ReAst& ast_;
	NumberedRe& out_;
	std::uint32_t copy_ = 0;

	std::uint32_t make(NumKind k, std::size_t origin, std::uint32_t parent)
	{
		if (out_.nodes.size() >= max_numbers)
			throw explosion_error("numbered expression too large");
		NumNode n;
		n.kind = k;
		n.number = static_cast<std::uint32_t>(out_.nodes.size() + 1);
		n.parent = parent;
		n.origin = origin;
		n.copy = copy_;
		out_.nodes.push_back(std::move(n));
		return out_.nodes.back().number;
	}

	void attach(std::uint32_t parent, std::uint32_t child)
	{
		out_.nodes[parent - 1].children.push_back(child);
	}

	// Numbers the subtree at AST node i and returns the number of its top numbered node.
	std::uint32_t visit(std::size_t i, std::uint32_t parent)
	{
		const ReNode& a = ast_[i];
		switch (a.kind) {
		case ReKind::terminal:
		case ReKind::char_class:
		case ReKind::wildcard: {
			std::uint32_t t = make(NumKind::terminal, i, parent);
			NumNode& n = out_.nodes[t - 1];
			n.chars = a.chars;
			if (a.kind == ReKind::terminal)
				n.label = char_label(static_cast<unsigned char>(a.chars._Find_first()));
			else if (a.kind == ReKind::wildcard)
				n.label = ".";
			else
				n.label = set_label(a.chars);
			return t;
		}
		case ReKind::epsilon:
			return make(NumKind::epsilon, i, parent);
		case ReKind::group: {
			std::size_t c = a.children[0];
			if (group_is_transparent(ast_[c].kind))
				return visit(c, parent);
			std::uint32_t g = make(NumKind::group, i, parent);
			attach(g, visit(c, g));
			return g;
		}
		case ReKind::concat:
		case ReKind::alt:
		case ReKind::star:
		case ReKind::cross:
		case ReKind::optional: {
			NumKind k = a.kind == ReKind::concat ? NumKind::concat
			          : a.kind == ReKind::alt    ? NumKind::alt
			          : a.kind == ReKind::star   ? NumKind::star
			          : a.kind == ReKind::cross  ? NumKind::cross
			                                     : NumKind::optional;
			std::uint32_t op = make(k, i, parent);
			for (std::size_t c : a.children)
				attach(op, visit(c, op));
			return op;
		}
		case ReKind::repeat:
			return repeat(i, parent);
		}
		return 0;
	}

	// h copies, then either a star over one more copy ({h,}) or a chain of nested
	// optionals holding the remaining k-h copies.
	std::uint32_t repeat(std::size_t i, std::uint32_t parent)
	{
		const ReNode& a = ast_[i];
		std::size_t child = a.children[0];
		std::uint32_t saved = copy_;
		std::uint32_t rep = make(NumKind::repeat, i, parent);
		std::uint32_t iter = 0;
		for (std::size_t k = 0; k < a.min; ++k) {
			copy_ = ++iter;
			attach(rep, visit(child, rep));
		}
		if (a.unbounded) {
			copy_ = saved;
			std::uint32_t st = make(NumKind::star, i, rep);
			attach(rep, st);
			copy_ = ++iter;
			attach(st, visit(child, st));
		} else {
			std::uint32_t holder = rep;
			for (std::size_t k = a.min; k < a.max; ++k) {
				copy_ = saved;
				std::uint32_t opt = make(NumKind::optional, i, holder);
				attach(holder, opt);
				copy_ = ++iter;
				attach(opt, visit(child, opt));
				holder = opt;
			}
		}
		copy_ = saved;
		return rep;
	}
};

void render(const NumberedRe& re, std::uint32_t num, std::vector<std::string>& out)
{
	const NumNode& n = re.node(num);
	std::string k = std::to_string(num);
	switch (n.kind) {
	case NumKind::terminal:
		out.push_back(n.label + k);
		return;
	case NumKind::epsilon:
		out.push_back("\xce\xb5" + k);
		return;
	default:
		break;
	}
	out.push_back(k + "(");
	for (std::size_t c = 0; c < n.children.size(); ++c) {
		if (c && n.kind == NumKind::alt)
			out.push_back("|");
		render(re, n.children[c], out);
	}
	std::string close = ")" + k;
	if (n.kind == NumKind::star)
		close += "*";
	else if (n.kind == NumKind::cross)
		close += "+";
	else if (n.kind == NumKind::optional)
		close += "?";
	out.push_back(close);
}

} // namespace

bool NumberedRe::is_operator(std::uint32_t number) const
{
	if (number == 0 || number > nodes.size())
		return false;
	NumKind k = node(number).kind;
	return k != NumKind::terminal && k != NumKind::epsilon;
}

bool NumberedRe::encloses(std::uint32_t anc, std::uint32_t number) const
{
	for (std::uint32_t x = number; x != no_node; x = node(x).parent)
		if (x == anc)
			return true;
	return false;
}

std::vector<std::uint32_t> NumberedRe::operator_children(std::uint32_t number) const
{
	std::vector<std::uint32_t> out;
	for (std::uint32_t c : node(number).children)
		if (is_operator(c))
			out.push_back(c);
	return out;
}

std::string NumberedRe::str() const
{
	std::vector<std::string> toks;
	render(*this, 1, toks);
	std::string s;
	for (std::size_t i = 0; i < toks.size(); ++i) {
		if (i)
			s += ' ';
		s += toks[i];
	}
	return s;
}

NumberedRe number_re(const ReAst& ast)
{
	NumberedRe re;
	re.ast = ast;
	Numberer(re.ast, re).run();

	std::vector<CharSet> sets;
	for (const NumNode& n : re.nodes)
		if (n.kind == NumKind::terminal)
			sets.push_back(n.chars);
	re.cells = partition_sets(sets);
	if (re.cells.size() >= no_cell)
		throw explosion_error("alphabet partition too large");
	std::fill(std::begin(re.byte_cell), std::end(re.byte_cell), no_cell);
	for (std::size_t c = 0; c < re.cells.size(); ++c)
		for (unsigned b = 0; b < 256; ++b)
			if (re.cells[c].test(b))
				re.byte_cell[b] = static_cast<std::uint16_t>(c);
	for (NumNode& n : re.nodes) {
		if (n.kind == NumKind::terminal) {
			for (std::size_t c = 0; c < re.cells.size(); ++c)
				if ((re.cells[c] & n.chars).any())
					n.cells.push_back(static_cast<std::uint16_t>(c));
		} else if (n.kind != NumKind::epsilon)
			re.ops.push_back({n.number, n.kind, n.children.size()});
	}
	return re;
}

NumberedRe number_re(std::string_view source)
{
	return number_re(parse_re(source));
}

} // namespace segparse
