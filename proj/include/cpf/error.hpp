#pragma once

#include <stdexcept>
#include <string>

namespace cpf {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error { public: using Error::Error; };
class NumericError : public Error { public: using Error::Error; };
class SingularityError : public Error { public: using Error::Error; };
class PartitionError : public Error { public: using Error::Error; };
class ResourceError : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };
class EstimationError : public Error { public: using Error::Error; };

}  // namespace cpf
