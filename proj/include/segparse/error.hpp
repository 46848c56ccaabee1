#ifndef SEGPARSE_ERROR_HPP
#define SEGPARSE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace segparse {

// Base class of every error thrown by the library.
class error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

// Malformed or unsupported regular expression; offset is a byte index into the source.
class syntax_error : public error {
public:
	syntax_error(const std::string& what, std::size_t offset)
		: error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
	std::size_t offset() const noexcept { return offset_; }
private:
	std::size_t offset_;
};

// A segment table or a powerset construction grew past its configured cap.
class explosion_error : public error {
public:
	using error::error;
};

// Query against a group number that is not a parenthesis pair of the expression,
// or a span that does not occur in the forest.
class query_error : public error {
public:
	using error::error;
};

// Corrupt or mismatching serialized forest.
class format_error : public error {
public:
	using error::error;
};

} // namespace segparse

#endif
